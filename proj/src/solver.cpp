#include "pedecomp/solver.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pedecomp/parallel.hpp"

namespace pedecomp {

namespace {

std::string describe_hypothesis_failure(const HypothesisReport& report) {
  std::ostringstream msg;
  msg << "hypothesis (H) fails on the solve box";
  if (report.spec_error) {
    msg << ": " << *report.spec_error;
  } else {
    msg << ": minimum margin " << report.min_margin << " for pursuer "
        << report.worst_pursuer + 1;
    for (const auto& v : report.sign_violations) msg << "; " << v;
  }
  return msg.str();
}

double block_norm(std::span<const double> v, std::size_t begin, std::size_t n) {
  double sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) sq += v[begin + k] * v[begin + k];
  return std::sqrt(sq);
}

// First s in [0, dt] with |z + s w| <= reach, w = (zf - z) / dt; dt when the
// segment from z to zf misses the ball.
double entry_time(const double* z, const double* zf, std::size_t n, double reach, double dt) {
  double ww = 0.0;
  double zw = 0.0;
  double zz = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = (zf[k] - z[k]) / dt;
    ww += w * w;
    zw += z[k] * w;
    zz += z[k] * z[k];
  }
  const double c = zz - reach * reach;
  if (c <= 0.0) return 0.0;
  const double disc = zw * zw - ww * c;
  if (ww == 0.0 || disc < 0.0) return dt;
  const double s = (-zw - std::sqrt(disc)) / ww;
  return (s >= 0.0 && s <= dt) ? s : dt;
}

}  // namespace

HypothesisError::HypothesisError(HypothesisReport report)
    : Error(describe_hypothesis_failure(report)), report_(std::move(report)) {}

double hamiltonian(const GameSpec& spec, std::span<const double> x, std::span<const double> p) {
  spec.require_state(x);
  spec.require_state(p);
  const auto n = static_cast<std::size_t>(spec.n());
  double pursuit = 0.0;
  std::vector<double> coupled(n, 0.0);
  double drift = 0.0;
  for (int i = 0; i < spec.m(); ++i) {
    BlockCoefficients c = spec.coefficients(x, i);
    pursuit += c.g * block_norm(p, i * n, n);
    if (spec.mode() == CoordinateMode::kRelative) {
      for (std::size_t k = 0; k < n; ++k) {
        coupled[k] += c.h * p[i * n + k];
        drift += c.l[k] * p[i * n + k];
      }
    }
  }
  double evasion = 0.0;
  if (spec.mode() == CoordinateMode::kRelative) {
    evasion = block_norm(coupled, 0, n);
  } else {
    double h = spec.h().front().eval(x.subspan(spec.m() * n, n));
    evasion = h * block_norm(p, spec.m() * n, n);
  }
  return spec.rho_a() * pursuit - spec.rho_b() * evasion - drift - 1.0;
}

std::vector<std::vector<double>> sphere_samples(int n, int count, double radius) {
  std::vector<std::vector<double>> pts;
  if (n == 1) {
    pts.push_back({-radius});
    pts.push_back({radius});
    return pts;
  }
  if (n == 2) {
    for (int k = 0; k < count; ++k) {
      double angle = 2.0 * std::numbers::pi * k / count;
      pts.push_back({radius * std::cos(angle), radius * std::sin(angle)});
    }
    return pts;
  }
  // Fibonacci lattice on S^2, padded with zeros for higher n.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    double z = 1.0 - 2.0 * (k + 0.5) / count;
    double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    std::vector<double> v(n, 0.0);
    v[0] = radius * rad * std::cos(golden * k);
    v[1] = radius * rad * std::sin(golden * k);
    v[2] = radius * z;
    pts.push_back(std::move(v));
  }
  return pts;
}

BellmanOperator::BellmanOperator(const GameSpec& spec, const SolveParams& params,
                                 const TensorGrid& grid)
    : spec_(spec),
      grid_(grid),
      evader_outer_(params.evader_outer),
      target_spec_(params.target),
      target_slack_(1e-9 * (1.0 + spec.r())) {
  if (static_cast<int>(grid_.dims()) != spec.state_dim()) {
    throw GridError("grid has " + std::to_string(grid_.dims()) + " axes but the state has " +
                    std::to_string(spec.state_dim()) + " coordinates");
  }
  const int n = spec.n();
  const int m = spec.m();
  samples_ = params.control_samples > 0 ? params.control_samples : (n == 1 ? 2 : 32);
  if (samples_ < 2) throw Error("control_samples must be >= 2");
  if (params.target.pursuer && (*params.target.pursuer < 0 || *params.target.pursuer >= m)) {
    throw SpecError("target pursuer index out of range");
  }
  pursuer_controls_ = sphere_samples(n, samples_, spec.rho_a());
  evader_controls_ = sphere_samples(n, samples_, spec.rho_b());
  evader_controls_.push_back(std::vector<double>(n, 0.0));

  const std::size_t nodes = grid_.size();
  const bool relative = spec.mode() == CoordinateMode::kRelative;
  g_.resize(nodes * m);
  h_.resize(relative ? nodes * m : nodes);
  if (spec.has_drift()) l_.resize(nodes * m * n);
  target_.resize(nodes);

  const double slack = target_slack_;
  double speed = 0.0;
  std::vector<double> x(grid_.dims());
  for (std::size_t node = 0; node < nodes; ++node) {
    grid_.node_point(node, x);
    target_[node] = spec.in_target(x, params.target, slack) ? 1 : 0;
    for (int i = 0; i < m; ++i) {
      BlockCoefficients c = spec.coefficients(x, i);
      g_[node * m + i] = c.g;
      if (relative) {
        h_[node * m + i] = c.h;
      } else if (i == 0) {
        h_[node] = c.h;
      }
      double l_norm = 0.0;
      for (int k = 0; k < n; ++k) {
        if (!l_.empty()) l_[(node * m + i) * n + k] = c.l[k];
        l_norm += c.l[k] * c.l[k];
      }
      double bound = relative ? std::abs(c.g) * spec.rho_a() + std::abs(c.h) * spec.rho_b() +
                                    std::sqrt(l_norm)
                              : std::max(std::abs(c.g) * spec.rho_a(), std::abs(c.h) * spec.rho_b());
      speed = std::max(speed, bound);
    }
  }

  if (params.time_step) {
    dt_ = *params.time_step;
  } else {
    dt_ = speed > 0.0 ? 0.8 * grid_.min_spacing() / speed : grid_.min_spacing();
  }
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw Error("time step must be positive");
  decay_ = std::exp(-dt_);

  if (params.allow_separable && spec.mode() == CoordinateMode::kAbsolute && m == 1 && n <= 3) {
    // Pursuer foot points must stay within one cell of the node per axis.
    double g_max = 0.0;
    for (double g : g_) g_max = std::max(g_max, std::abs(g));
    double reach = dt_ * g_max * spec.rho_a();
    separable_ = true;
    for (int k = 0; k < n; ++k) separable_ = separable_ && reach < 0.999 * grid_.spacing(k);
  }

  if (!separable_ && params.stencil_cache_limit > 0 && grid_.dims() < 32 &&
      nodes < std::numeric_limits<std::uint32_t>::max()) {
    corners_ = std::size_t{1} << grid_.dims();
    double entries = static_cast<double>(nodes) * static_cast<double>(evader_controls_.size()) *
                     std::pow(static_cast<double>(pursuer_controls_.size()), m) *
                     static_cast<double>(corners_);
    if (entries <= static_cast<double>(params.stencil_cache_limit)) {
      combos_ = 1;
      for (int i = 0; i < m; ++i) combos_ *= pursuer_controls_.size();
      build_stencil_cache();
    }
  }
}

std::size_t BellmanOperator::target_count() const {
  return static_cast<std::size_t>(std::count(target_.begin(), target_.end(), char{1}));
}

void BellmanOperator::foot_point(std::span<const double> x, std::size_t node,
                                 std::span<const double> b, std::span<const std::size_t> combo,
                                 std::span<double> foot) const {
  const std::size_t n = static_cast<std::size_t>(spec_.n());
  const std::size_t m = static_cast<std::size_t>(spec_.m());
  if (spec_.mode() == CoordinateMode::kRelative) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto& a = pursuer_controls_[combo[i]];
      const double g = g_[node * m + i];
      const double h = h_[node * m + i];
      for (std::size_t k = 0; k < n; ++k) {
        double v = -g * a[k] + h * b[k];
        if (!l_.empty()) v += l_[(node * m + i) * n + k];
        foot[i * n + k] = x[i * n + k] + dt_ * v;
      }
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      const auto& a = pursuer_controls_[combo[i]];
      const double g = g_[node * m + i];
      for (std::size_t k = 0; k < n; ++k) foot[i * n + k] = x[i * n + k] - dt_ * g * a[k];
    }
    const double h = h_[node];
    for (std::size_t k = 0; k < n; ++k) foot[m * n + k] = x[m * n + k] + dt_ * h * b[k];
  }
}

double BellmanOperator::foot_value(std::span<const double> prev, std::span<const double> x,
                                   std::size_t node, std::span<const double> b,
                                   std::span<const std::size_t> combo,
                                   std::span<double> foot) const {
  foot_point(x, node, b, combo, foot);
  if (spec_.in_target(foot, target_spec_, target_slack_)) return captured_value(x, foot);
  return interpolate(grid_, prev, foot).value;
}

void BellmanOperator::build_stencil_cache() {
  const std::size_t m = static_cast<std::size_t>(spec_.m());
  const std::size_t per = pursuer_controls_.size();
  const std::size_t evaders = evader_controls_.size();
  const std::size_t nodes = grid_.size();
  std::vector<double> x(grid_.dims());
  std::vector<double> foot(grid_.dims());
  std::vector<std::size_t> pick(m);
  std::vector<std::size_t> index(corners_);
  std::vector<double> weight(corners_);
  const std::size_t entries = nodes * evaders * combos_;
  cache_fixed_.assign(entries, 0.0);
  cache_index_.assign(entries * corners_, 0);
  cache_weight_.assign(entries * corners_, 0.0);
  for (std::size_t node = 0; node < nodes; ++node) {
    if (target_[node]) continue;
    grid_.node_point(node, x);
    for (std::size_t e = 0; e < evaders; ++e) {
      std::fill(pick.begin(), pick.end(), 0);
      for (std::size_t c = 0; c < combos_; ++c) {
        const std::size_t entry = (node * evaders + e) * combos_ + c;
        foot_point(x, node, evader_controls_[e], pick, foot);
        if (spec_.in_target(foot, target_spec_, target_slack_)) {
          cache_fixed_[entry] = captured_value(x, foot);
        } else {
          cache_fixed_[entry] = std::numeric_limits<double>::quiet_NaN();
          interpolation_stencil(grid_, foot, index, weight);
          for (std::size_t k = 0; k < corners_; ++k) {
            cache_index_[entry * corners_ + k] = static_cast<std::uint32_t>(index[k]);
            cache_weight_[entry * corners_ + k] = weight[k];
          }
        }
        for (std::size_t i = m; i-- > 0;) {
          if (++pick[i] < per) break;
          pick[i] = 0;
        }
      }
    }
  }
}

double BellmanOperator::update_cached(std::span<const double> prev, std::size_t node) const {
  const std::size_t evaders = evader_controls_.size();
  const std::size_t first = node * evaders * combos_;
  auto value = [&](std::size_t entry) {
    const double fixed = cache_fixed_[entry];
    if (!std::isnan(fixed)) return fixed;
    const std::uint32_t* idx = &cache_index_[entry * corners_];
    const double* w = &cache_weight_[entry * corners_];
    double sum = 0.0;
    for (std::size_t k = 0; k < corners_; ++k) sum += w[k] * prev[idx[k]];
    return sum;
  };
  double best;
  if (evader_outer_) {
    best = -std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < evaders; ++e) {
      double inner = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < combos_; ++c) {
        inner = std::min(inner, value(first + e * combos_ + c));
      }
      best = std::max(best, inner);
    }
  } else {
    best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < combos_; ++c) {
      double inner = -std::numeric_limits<double>::infinity();
      for (std::size_t e = 0; e < evaders; ++e) {
        inner = std::max(inner, value(first + e * combos_ + c));
      }
      best = std::min(best, inner);
    }
  }
  return 1.0 - decay_ * (1.0 - best);
}

double BellmanOperator::captured_value(std::span<const double> x,
                                       std::span<const double> foot) const {
  const std::size_t n = static_cast<std::size_t>(spec_.n());
  const std::size_t m = static_cast<std::size_t>(spec_.m());
  const bool absolute = spec_.mode() == CoordinateMode::kAbsolute;
  const double reach = spec_.r() + target_slack_;
  double tau = dt_;
  for (std::size_t i = 0; i < m; ++i) {
    if (target_spec_.pursuer && static_cast<std::size_t>(*target_spec_.pursuer) != i) continue;
    std::array<double, kMaxGridDims> z{};
    std::array<double, kMaxGridDims> zf{};
    for (std::size_t k = 0; k < n; ++k) {
      z[k] = x[i * n + k] - (absolute ? x[m * n + k] : 0.0);
      zf[k] = foot[i * n + k] - (absolute ? foot[m * n + k] : 0.0);
    }
    tau = std::min(tau, entry_time(z.data(), zf.data(), n, reach, dt_));
  }
  return entry_value(tau);
}

double BellmanOperator::update_separable(std::span<const double> prev, std::size_t node) const {
  // Axes 0..n-1 hold the pursuer, n..2n-1 the evader. Multilinear
  // interpolation factorizes: first interpolate over the evader axes at each
  // of the 3^n pursuer nodes around `node`, then blend those partial values
  // with the pursuer weights of every sampled control.
  constexpr std::size_t kMaxNeighbors = 27;
  constexpr std::size_t kMaxCorners = 8;
  const std::size_t n = static_cast<std::size_t>(spec_.n());
  const std::size_t corners = std::size_t{1} << n;
  std::size_t neighbors = 1;
  for (std::size_t k = 0; k < n; ++k) neighbors *= 3;

  std::array<std::size_t, 6> idx{};
  std::array<double, 6> x{};
  std::size_t rest = node;
  for (std::size_t k = 0; k < 2 * n; ++k) {
    idx[k] = rest / grid_.stride(k);
    rest %= grid_.stride(k);
    x[k] = grid_.axis(k).coordinate(idx[k]);
  }

  // Flat offsets of the pursuer neighborhood, evader axes at index 0.
  std::array<std::size_t, kMaxNeighbors> neighbor_offset{};
  for (std::size_t c = 0; c < neighbors; ++c) {
    std::size_t code = c;
    std::size_t off = 0;
    for (std::size_t k = n; k-- > 0;) {
      long j = static_cast<long>(idx[k]) - 1 + static_cast<long>(code % 3);
      code /= 3;
      j = std::clamp(j, 0L, static_cast<long>(grid_.axis(k).count) - 1);
      off += static_cast<std::size_t>(j) * grid_.stride(k);
    }
    neighbor_offset[c] = off;
  }

  // Per pursuer sample: neighborhood codes and weights of its 2^n corners.
  const double g = g_[node];
  const std::size_t samples = pursuer_controls_.size();
  std::vector<std::array<double, kMaxCorners>> pw(samples);
  std::vector<std::array<std::size_t, kMaxCorners>> pc(samples);
  std::vector<std::array<double, 3>> pfoot(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto& a = pursuer_controls_[s];
    for (std::size_t k = 0; k < n; ++k) pfoot[s][k] = x[k] - dt_ * g * a[k];
    pw[s][0] = 1.0;
    pc[s][0] = 0;
    std::size_t built = 1;
    std::size_t place = neighbors;
    for (std::size_t k = 0; k < n; ++k) {
      place /= 3;
      const Axis& ax = grid_.axis(k);
      double t = (x[k] - dt_ * g * a[k] - ax.lo) * grid_.inverse_spacing(k);
      t = std::clamp(t, 0.0, static_cast<double>(ax.count - 1));
      long i0 = std::min(static_cast<long>(t), static_cast<long>(ax.count) - 2);
      double w = t - static_cast<double>(i0);
      long local = i0 - (static_cast<long>(idx[k]) - 1);
      if (local < 0) {
        local = 0;
        w = 0.0;
      } else if (local > 1) {
        local = 1;
        w = 1.0;
      }
      for (std::size_t c = 0; c < built; ++c) {
        pw[s][c + built] = pw[s][c] * w;
        pc[s][c + built] = pc[s][c] + (static_cast<std::size_t>(local) + 1) * place;
        pw[s][c] *= 1.0 - w;
        pc[s][c] += static_cast<std::size_t>(local) * place;
      }
      built <<= 1;
    }
  }

  // Evader-stage partial values for one evader control.
  const double h = h_[node];
  const double reach = spec_.r() + target_slack_;
  // Entry value of a captured foot point, NaN when the foot is outside.
  auto captured = [&](std::size_t s, std::span<const double> b) {
    std::array<double, 3> z{};
    std::array<double, 3> zf{};
    double sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      z[k] = x[k] - x[n + k];
      zf[k] = pfoot[s][k] - (x[n + k] + dt_ * h * b[k]);
      sq += zf[k] * zf[k];
    }
    if (std::sqrt(sq) > reach) return std::numeric_limits<double>::quiet_NaN();
    return entry_value(entry_time(z.data(), zf.data(), n, reach, dt_));
  };
  auto partial = [&](std::span<const double> b, std::span<double> out) {
    std::array<double, kMaxCorners> ew{};
    std::array<std::size_t, kMaxCorners> eo{};
    ew[0] = 1.0;
    eo[0] = 0;
    std::size_t built = 1;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t axis = n + k;
      const Axis& ax = grid_.axis(axis);
      double t = (x[axis] + dt_ * h * b[k] - ax.lo) * grid_.inverse_spacing(axis);
      t = std::clamp(t, 0.0, static_cast<double>(ax.count - 1));
      std::size_t i0 = std::min(static_cast<std::size_t>(t), ax.count - 2);
      double w = t - static_cast<double>(i0);
      const std::size_t stride = grid_.stride(axis);
      for (std::size_t c = 0; c < built; ++c) {
        ew[c + built] = ew[c] * w;
        eo[c + built] = eo[c] + (i0 + 1) * stride;
        ew[c] *= 1.0 - w;
        eo[c] += i0 * stride;
      }
      built <<= 1;
    }
    for (std::size_t c = 0; c < neighbors; ++c) {
      double sum = 0.0;
      for (std::size_t e = 0; e < built; ++e) sum += ew[e] * prev[neighbor_offset[c] + eo[e]];
      out[c] = sum;
    }
  };
  auto blend = [&](std::size_t s, std::span<const double> part, std::span<const double> b) {
    if (double v = captured(s, b); !std::isnan(v)) return v;
    double sum = 0.0;
    for (std::size_t c = 0; c < corners; ++c) sum += pw[s][c] * part[pc[s][c]];
    return sum;
  };

  std::array<double, kMaxNeighbors> part{};
  double best;
  if (evader_outer_) {
    best = -std::numeric_limits<double>::infinity();
    for (const auto& b : evader_controls_) {
      partial(b, part);
      double inner = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < samples; ++s) inner = std::min(inner, blend(s, part, b));
      best = std::max(best, inner);
    }
  } else {
    std::vector<std::array<double, kMaxNeighbors>> parts(evader_controls_.size());
    for (std::size_t e = 0; e < evader_controls_.size(); ++e) partial(evader_controls_[e], parts[e]);
    best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) {
      double inner = -std::numeric_limits<double>::infinity();
      for (std::size_t e = 0; e < parts.size(); ++e) {
        inner = std::max(inner, blend(s, parts[e], evader_controls_[e]));
      }
      best = std::min(best, inner);
    }
  }
  return 1.0 - decay_ * (1.0 - best);
}

double BellmanOperator::update(std::span<const double> prev, std::size_t node) const {
  if (target_[node]) return 0.0;
  if (separable_) return update_separable(prev, node);
  if (!cache_fixed_.empty()) return update_cached(prev, node);
  const std::size_t m = static_cast<std::size_t>(spec_.m());
  const std::size_t per = pursuer_controls_.size();

  std::array<double, kMaxGridDims> x_buf{};
  std::array<double, kMaxGridDims> foot_buf{};
  std::array<std::size_t, kMaxGridDims> combo{};
  std::span<double> x(x_buf.data(), grid_.dims());
  std::span<double> foot(foot_buf.data(), grid_.dims());
  std::span<std::size_t> pick(combo.data(), m);
  grid_.node_point(node, x);

  // Advances the joint pursuer sample index; false after the last one.
  auto next_combo = [&] {
    for (std::size_t i = m; i-- > 0;) {
      if (++pick[i] < per) return true;
      pick[i] = 0;
    }
    return false;
  };

  double best;
  if (evader_outer_) {
    best = -std::numeric_limits<double>::infinity();
    for (const auto& b : evader_controls_) {
      double inner = std::numeric_limits<double>::infinity();
      std::fill(pick.begin(), pick.end(), 0);
      do {
        inner = std::min(inner, foot_value(prev, x, node, b, pick, foot));
      } while (next_combo());
      best = std::max(best, inner);
    }
  } else {
    best = std::numeric_limits<double>::infinity();
    std::fill(pick.begin(), pick.end(), 0);
    do {
      double inner = -std::numeric_limits<double>::infinity();
      for (const auto& b : evader_controls_) {
        inner = std::max(inner, foot_value(prev, x, node, b, pick, foot));
      }
      best = std::min(best, inner);
    } while (next_combo());
  }
  return 1.0 - decay_ * (1.0 - best);
}

double bellman_update(const GameSpec& spec, const SolveParams& params, const ValueField& field,
                      std::span<const std::size_t> node) {
  BellmanOperator op(spec, params, field.grid());
  return op.update(field.values(), field.grid().flat_index(node));
}

SolveResult solve_hji(const GameSpec& spec, const SolveParams& params, const TensorGrid& grid) {
  const auto start = std::chrono::steady_clock::now();
  if (static_cast<int>(grid.dims()) != spec.state_dim()) {
    throw GridError("grid has " + std::to_string(grid.dims()) + " axes but the state has " +
                    std::to_string(spec.state_dim()) + " coordinates");
  }
  if (!(params.tolerance > 0.0)) throw Error("tolerance must be positive");

  HypothesisReport hyp = check_hypothesis_H(spec, grid.box(), params.hypothesis_samples);
  if (!hyp.pass) throw HypothesisError(std::move(hyp));

  if (spec.r() < grid.max_spacing()) {
    std::ostringstream msg;
    msg << "capture radius r=" << spec.r() << " is not resolved by grid spacing "
        << grid.max_spacing() << "; use r >= " << grid.max_spacing() << " or refine the grid";
    throw GridError(msg.str());
  }

  BellmanOperator op(spec, params, grid);
  SolveReport report;
  report.nodes = grid.size();
  report.target_nodes = op.target_count();
  report.time_step = op.time_step();
  report.control_samples = op.control_samples();
  if (report.target_nodes == 0) throw GridError("no grid node lies inside the target set");

  const std::size_t nodes = grid.size();
  std::vector<double> current(nodes), next(nodes);
  for (std::size_t node = 0; node < nodes; ++node) current[node] = op.is_target(node) ? 0.0 : 1.0;

  struct ChunkStats {
    double residual = 0.0;
    double increase = 0.0;
    double lo = 1.0;
    double hi = 0.0;
  };
  std::vector<ChunkStats> stats(std::max(1u, params.threads));

  for (long it = 0; it < params.max_iterations; ++it) {
    std::fill(stats.begin(), stats.end(), ChunkStats{});
    parallel_chunks(nodes, params.threads,
                    [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                      ChunkStats s;
                      for (std::size_t node = begin; node < end; ++node) {
                        double v = op.update(current, node);
                        double diff = v - current[node];
                        s.residual = std::max(s.residual, std::abs(diff));
                        s.increase = std::max(s.increase, diff);
                        s.lo = std::min(s.lo, v);
                        s.hi = std::max(s.hi, v);
                        next[node] = v;
                      }
                      stats[chunk] = s;
                    });
    double residual = 0.0;
    for (const auto& s : stats) {
      residual = std::max(residual, s.residual);
      report.max_increase = std::max(report.max_increase, s.increase);
      report.min_value = std::min(report.min_value, s.lo);
      report.max_value = std::max(report.max_value, s.hi);
    }
    current.swap(next);
    report.iterations = it + 1;
    report.residual = residual;
    report.residual_history.push_back(residual);
    if (residual < params.tolerance) {
      report.converged = true;
      break;
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {ValueField(grid, std::move(current)), std::move(report)};
}

}  // namespace pedecomp
