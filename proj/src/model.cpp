#include "pedecomp/model.hpp"

#include <cmath>
#include <limits>

#include "pedecomp/errors.hpp"

namespace pedecomp {

std::string to_string(CoordinateMode mode) {
  return mode == CoordinateMode::kRelative ? "relative" : "absolute";
}

CoordinateMode coordinate_mode_from_string(const std::string& text) {
  if (text == "relative") return CoordinateMode::kRelative;
  if (text == "absolute") return CoordinateMode::kAbsolute;
  throw SpecError("unknown coordinate mode '" + text + "'");
}

namespace {

bool all_same_text(const std::vector<ScalarFieldExpr>& fields) {
  for (const auto& f : fields) {
    if (f.to_string() != fields.front().to_string()) return false;
  }
  return true;
}

void require_dimension(const ScalarFieldExpr& f, int dim, const char* what) {
  if (f.dimension() != dim) {
    throw SpecError(std::string(what) + " field '" + f.to_string() + "' is written over " +
                    std::to_string(f.dimension()) + " variables, expected " +
                    std::to_string(dim));
  }
}

}  // namespace

GameSpec::GameSpec(GameSpecParams params) : p_(std::move(params)) {
  if (p_.m < 1) throw SpecError("m must be >= 1");
  if (p_.n < 1) throw SpecError("n must be >= 1");
  if (!(p_.rho_a > 0.0) || !std::isfinite(p_.rho_a)) throw SpecError("rho_a must be > 0");
  if (!(p_.rho_b > 0.0) || !std::isfinite(p_.rho_b)) throw SpecError("rho_b must be > 0");
  if (!(p_.r >= 0.0) || !std::isfinite(p_.r)) throw SpecError("r must be >= 0");

  const auto m = static_cast<std::size_t>(p_.m);
  const auto n = static_cast<std::size_t>(p_.n);
  if (p_.g.size() == 1 && m > 1) p_.g.assign(m, p_.g.front());
  if (p_.g.size() != m) throw SpecError("expected " + std::to_string(m) + " g fields");

  if (p_.mode == CoordinateMode::kRelative) {
    if (p_.h.size() == 1 && m > 1) p_.h.assign(m, p_.h.front());
    if (p_.h.size() != m) throw SpecError("expected " + std::to_string(m) + " h fields");
    if (!p_.l.empty()) {
      if (p_.l.size() != m) throw SpecError("expected " + std::to_string(m) + " l fields");
      for (const auto& li : p_.l) {
        if (li.size() != n) {
          throw SpecError("each l field needs " + std::to_string(n) + " components");
        }
      }
    }
    const bool same = all_same_text(p_.g);
    if (!p_.shared_g) p_.shared_g = same;
    if (*p_.shared_g && !same) throw SpecError("shared_g set but the g fields differ");
  } else {
    if (!all_same_text(p_.g)) {
      throw SpecError("absolute mode requires one g field shared by all pursuers");
    }
    if (p_.shared_g && !*p_.shared_g) throw SpecError("absolute mode requires shared_g");
    p_.shared_g = true;
    if (p_.h.size() != 1) throw SpecError("absolute mode takes a single evader h field");
    for (const auto& li : p_.l) {
      for (const auto& c : li) {
        if (!c.is_constant() || c.eval(std::vector<double>(c.dimension(), 0.0)) != 0.0) {
          throw SpecError("absolute mode does not support drift terms");
        }
      }
    }
    p_.l.clear();
  }

  const int fdim = field_dim();
  for (const auto& f : p_.g) require_dimension(f, fdim, "g");
  for (const auto& f : p_.h) require_dimension(f, fdim, "h");
  for (const auto& li : p_.l) {
    for (const auto& f : li) require_dimension(f, fdim, "l");
  }
}

int GameSpec::state_dim() const { return p_.n * block_count(); }

int GameSpec::block_count() const {
  return p_.mode == CoordinateMode::kRelative ? p_.m : p_.m + 1;
}

int GameSpec::field_dim() const {
  return p_.mode == CoordinateMode::kRelative ? p_.n * p_.m : p_.n;
}

void GameSpec::require_state(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != state_dim()) {
    throw SpecError("state has dimension " + std::to_string(x.size()) + ", expected " +
                    std::to_string(state_dim()) + " (" + to_string(p_.mode) + " mode)");
  }
}

BlockCoefficients GameSpec::coefficients(std::span<const double> x, int pursuer) const {
  BlockCoefficients c;
  const auto n = static_cast<std::size_t>(p_.n);
  c.l.assign(n, 0.0);
  if (p_.mode == CoordinateMode::kRelative) {
    c.g = p_.g[pursuer].eval(x);
    c.h = p_.h[pursuer].eval(x);
    if (!p_.l.empty()) {
      for (std::size_t k = 0; k < n; ++k) c.l[k] = p_.l[pursuer][k].eval(x);
    }
  } else {
    c.g = p_.g[pursuer].eval(x.subspan(pursuer * n, n));
    c.h = p_.h.front().eval(x.subspan(p_.m * n, n));
  }
  return c;
}

double GameSpec::capture_distance(std::span<const double> x, int pursuer) const {
  const auto n = static_cast<std::size_t>(p_.n);
  double sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double d = x[pursuer * n + k];
    if (p_.mode == CoordinateMode::kAbsolute) d -= x[p_.m * n + k];
    sq += d * d;
  }
  return std::sqrt(sq);
}

std::pair<double, int> GameSpec::min_capture_distance(std::span<const double> x) const {
  double best = std::numeric_limits<double>::infinity();
  int who = 0;
  for (int i = 0; i < p_.m; ++i) {
    double d = capture_distance(x, i);
    if (d < best) {
      best = d;
      who = i;
    }
  }
  return {best, who};
}

bool GameSpec::in_target(std::span<const double> x, const TargetSpec& target,
                         double slack) const {
  if (target.pursuer) return capture_distance(x, *target.pursuer) <= p_.r + slack;
  return min_capture_distance(x).first <= p_.r + slack;
}

bool controls_admissible(const GameSpec& spec, const ControlPair& u, double slack) {
  const auto n = static_cast<std::size_t>(spec.n());
  if (u.a.size() != n * spec.m() || u.b.size() != n) return false;
  for (int i = 0; i < spec.m(); ++i) {
    double sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) sq += u.a[i * n + k] * u.a[i * n + k];
    if (std::sqrt(sq) > spec.rho_a() + slack) return false;
  }
  double sq = 0.0;
  for (double v : u.b) sq += v * v;
  return std::sqrt(sq) <= spec.rho_b() + slack;
}

std::vector<double> dynamics_rhs(const GameSpec& spec, std::span<const double> x,
                                 const ControlPair& u) {
  spec.require_state(x);
  const auto n = static_cast<std::size_t>(spec.n());
  if (u.a.size() != n * spec.m() || u.b.size() != n) {
    throw SpecError("control dimensions do not match the game");
  }
  std::vector<double> v(x.size(), 0.0);
  for (int i = 0; i < spec.m(); ++i) {
    BlockCoefficients c = spec.coefficients(x, i);
    for (std::size_t k = 0; k < n; ++k) {
      double vk = -c.g * u.a[i * n + k];
      if (spec.mode() == CoordinateMode::kRelative) vk += c.h * u.b[k] + c.l[k];
      v[i * n + k] = vk;
    }
  }
  if (spec.mode() == CoordinateMode::kAbsolute) {
    double h = spec.h().front().eval(x.subspan(spec.m() * n, n));
    for (std::size_t k = 0; k < n; ++k) v[spec.m() * n + k] = h * u.b[k];
  }
  return v;
}

HypothesisReport check_hypothesis_H(const GameSpec& spec, const Box& box,
                                    std::size_t samples, std::uint64_t seed) {
  if (static_cast<int>(box.dims()) != spec.state_dim()) {
    throw SpecError("hypothesis box has dimension " + std::to_string(box.dims()) +
                    ", expected " + std::to_string(spec.state_dim()));
  }
  HypothesisReport report;
  report.min_margin = std::numeric_limits<double>::infinity();
  bool negative_h = false;
  bool nonpositive_g = false;

  for (const auto& x : sample_box(box, samples, seed)) {
    ++report.samples;
    for (int i = 0; i < spec.m(); ++i) {
      BlockCoefficients c;
      try {
        c = spec.coefficients(x, i);
      } catch (const DomainError& e) {
        report.spec_error = e.what();
        report.pass = false;
        return report;
      }
      double l_norm = 0.0;
      for (double v : c.l) l_norm += v * v;
      l_norm = std::sqrt(l_norm);
      double margin = c.g * spec.rho_a() - c.h * spec.rho_b() - l_norm;
      if (!std::isfinite(margin)) {
        report.spec_error = "non-finite coefficient for pursuer " + std::to_string(i + 1);
        report.pass = false;
        return report;
      }
      if (margin < report.min_margin) {
        report.min_margin = margin;
        report.worst_x = x;
        report.worst_pursuer = i;
      }
      if (c.g <= 0.0 && !nonpositive_g) {
        nonpositive_g = true;
        report.sign_violations.push_back("g_" + std::to_string(i + 1) +
                                         " is not positive somewhere in the box");
      }
      if (c.h < 0.0 && !negative_h) {
        negative_h = true;
        report.sign_violations.push_back("h_" + std::to_string(i + 1) +
                                         " is negative somewhere in the box");
      }
    }
  }
  report.pass = report.samples > 0 && report.min_margin > 0.0 &&
                report.sign_violations.empty();
  return report;
}

}  // namespace pedecomp
