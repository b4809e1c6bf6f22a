#include "pedecomp/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

namespace pedecomp {

namespace {

void require_block_local(const ScalarFieldExpr& f, int pursuer, int n, const std::string& name) {
  for (int v : f.variables()) {
    if (v / n != pursuer) {
      throw DecompositionError(name + " depends on x" + std::to_string(v + 1) +
                               ", outside the block of pursuer " + std::to_string(pursuer + 1) +
                               " (x" + std::to_string(pursuer * n + 1) + "..x" +
                               std::to_string(pursuer * n + n) + ")");
    }
  }
}

std::string game_key(const GameSpec& spec, const TensorGrid& grid) {
  char buf[96];
  std::string key = to_string(spec.mode());
  std::snprintf(buf, sizeof buf, "|%d|%d|%.17g|%.17g|%.17g", spec.m(), spec.n(), spec.rho_a(),
                spec.rho_b(), spec.r());
  key += buf;
  for (const auto& f : spec.g()) key += "|g:" + f.to_string();
  for (const auto& f : spec.h()) key += "|h:" + f.to_string();
  for (const auto& row : spec.l()) {
    for (const auto& f : row) key += "|l:" + f.to_string();
  }
  for (const Axis& a : grid.axes()) {
    std::snprintf(buf, sizeof buf, "|%.17g:%.17g:%zu", a.lo, a.hi, a.count);
    key += buf;
  }
  return key;
}

}  // namespace

std::vector<SubProblem> decompose(const GameSpec& spec) {
  const int m = spec.m();
  const int n = spec.n();
  std::vector<SubProblem> out;
  out.reserve(m);

  if (spec.mode() == CoordinateMode::kRelative) {
    for (int i = 0; i < m; ++i) {
      const std::string tag = std::to_string(i + 1);
      require_block_local(spec.g()[i], i, n, "g_" + tag);
      require_block_local(spec.h()[i], i, n, "h_" + tag);
      if (spec.has_drift()) {
        for (int k = 0; k < n; ++k) {
          require_block_local(spec.l()[i][k], i, n, "l_" + tag + "[" + std::to_string(k + 1) + "]");
        }
      }
      std::map<int, int> remap;
      std::vector<int> embedding;
      for (int k = 0; k < n; ++k) {
        remap[i * n + k] = k;
        embedding.push_back(i * n + k);
      }
      GameSpecParams p;
      p.mode = CoordinateMode::kRelative;
      p.m = 1;
      p.n = n;
      p.rho_a = spec.rho_a();
      p.rho_b = spec.rho_b();
      p.r = spec.r();
      p.g = {spec.g()[i].remap(remap, n)};
      p.h = {spec.h()[i].remap(remap, n)};
      if (spec.has_drift()) {
        std::vector<ScalarFieldExpr> li;
        for (int k = 0; k < n; ++k) li.push_back(spec.l()[i][k].remap(remap, n));
        p.l = {std::move(li)};
      }
      out.push_back(SubProblem{i, GameSpec(std::move(p)), std::move(embedding)});
    }
    return out;
  }

  if (!spec.shared_g()) {
    throw DecompositionError("absolute mode needs one speed field shared by all pursuers");
  }
  for (int i = 0; i < m; ++i) {
    std::vector<int> embedding;
    for (int k = 0; k < n; ++k) embedding.push_back(i * n + k);
    for (int k = 0; k < n; ++k) embedding.push_back(m * n + k);
    GameSpecParams p;
    p.mode = CoordinateMode::kAbsolute;
    p.m = 1;
    p.n = n;
    p.rho_a = spec.rho_a();
    p.rho_b = spec.rho_b();
    p.r = spec.r();
    p.g = {spec.g()[i]};
    p.h = {spec.h().front()};
    out.push_back(SubProblem{i, GameSpec(std::move(p)), std::move(embedding)});
  }
  return out;
}

EnvelopeValue::EnvelopeValue(std::vector<EmbeddedField> parts, int full_dim, double delta)
    : parts_(std::move(parts)), full_dim_(full_dim), delta_(delta) {
  if (parts_.empty()) throw Error("envelope needs at least one sub-value field");
  if (!(delta_ >= 0.0)) throw Error("envelope tolerance must be >= 0");
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const auto& e = parts_[i].embedding;
    if (e.size() != parts_[i].field.dims()) {
      throw Error("sub-field " + std::to_string(i + 1) + " embedding size does not match its grid");
    }
    std::set<int> seen;
    for (int c : e) {
      if (c < 0 || c >= full_dim_ || !seen.insert(c).second) {
        throw Error("sub-field " + std::to_string(i + 1) + " has an invalid embedding");
      }
    }
  }
}

std::vector<double> EnvelopeValue::gather(std::size_t i, std::span<const double> x) const {
  const auto& e = parts_[i].embedding;
  std::vector<double> local(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) local[k] = x[e[k]];
  return local;
}

Interpolated EnvelopeValue::component(std::size_t i, std::span<const double> x) const {
  return parts_[i].field.interpolate(gather(i, x));
}

std::vector<double> EnvelopeValue::component_gradient(std::size_t i,
                                                      std::span<const double> x) const {
  auto local = numerical_gradient(parts_[i].field, gather(i, x));
  std::vector<double> full(full_dim_, 0.0);
  const auto& e = parts_[i].embedding;
  for (std::size_t k = 0; k < e.size(); ++k) full[e[k]] = local[k];
  return full;
}

EnvelopeSample EnvelopeValue::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != full_dim_) {
    throw Error("envelope query has dimension " + std::to_string(x.size()) + ", expected " +
                std::to_string(full_dim_));
  }
  EnvelopeSample s;
  s.value = std::numeric_limits<double>::infinity();
  std::vector<double> values(parts_.size());
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    Interpolated v = component(i, x);
    values[i] = v.value;
    s.clamped = s.clamped || v.clamped;
    if (v.value < s.value) {
      s.value = v.value;
      s.argmin = static_cast<int>(i);
    }
  }
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (values[i] <= s.value + delta_) s.active.push_back(static_cast<int>(i));
  }
  return s;
}

std::vector<int> EnvelopeValue::active_set(std::span<const double> x, double tolerance) const {
  std::vector<double> values(parts_.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    values[i] = component(i, x).value;
    best = std::min(best, values[i]);
  }
  std::vector<int> active;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (values[i] <= best + tolerance) active.push_back(static_cast<int>(i));
  }
  return active;
}

Box EnvelopeValue::box() const {
  Box b;
  b.lo.assign(full_dim_, -std::numeric_limits<double>::infinity());
  b.hi.assign(full_dim_, std::numeric_limits<double>::infinity());
  for (const auto& part : parts_) {
    for (std::size_t k = 0; k < part.embedding.size(); ++k) {
      const Axis& a = part.field.grid().axis(k);
      int c = part.embedding[k];
      b.lo[c] = std::max(b.lo[c], a.lo);
      b.hi[c] = std::min(b.hi[c], a.hi);
    }
  }
  for (int c = 0; c < full_dim_; ++c) {
    if (!std::isfinite(b.lo[c]) || !std::isfinite(b.hi[c]) || b.lo[c] > b.hi[c]) {
      throw Error("coordinate x" + std::to_string(c + 1) + " is not covered by every sub-grid");
    }
  }
  return b;
}

EnvelopeValue envelope(std::vector<EmbeddedField> subfields, int full_dim,
                       std::optional<double> delta) {
  if (!delta) {
    double spacing = 0.0;
    for (const auto& part : subfields) spacing = std::max(spacing, part.field.grid().max_spacing());
    delta = std::max(1e-5, spacing);
  }
  return EnvelopeValue(std::move(subfields), full_dim, *delta);
}

ConvexityCheck check_convex_combinations(const GameSpec& spec, std::span<const double> x,
                                         const std::vector<std::vector<double>>& gradients,
                                         bool full_simplex) {
  const std::size_t k = gradients.size();
  ConvexityCheck out;
  if (k == 0) return out;
  std::vector<double> h_each(k);
  for (std::size_t i = 0; i < k; ++i) h_each[i] = hamiltonian(spec, x, gradients[i]);

  auto test = [&](const std::vector<double>& w) {
    std::vector<double> mix(gradients.front().size(), 0.0);
    double rhs = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t c = 0; c < mix.size(); ++c) mix[c] += w[i] * gradients[i][c];
      rhs += w[i] * h_each[i];
    }
    double violation = hamiltonian(spec, x, mix) - rhs;
    if (out.weights.empty() || violation > out.worst_violation) {
      out.worst_violation = violation;
      out.weights = w;
    }
  };

  std::vector<std::vector<double>> weight_sets;
  if (full_simplex) {
    // Lattice {w : w_i = j_i / 10, sum j_i = 10}.
    constexpr int kSteps = 10;
    std::vector<int> j(k, 0);
    auto recurse = [&](auto&& self, std::size_t pos, int left) -> void {
      if (pos + 1 == k) {
        j[pos] = left;
        std::vector<double> w(k);
        for (std::size_t i = 0; i < k; ++i) w[i] = static_cast<double>(j[i]) / kSteps;
        weight_sets.push_back(std::move(w));
        return;
      }
      for (int v = 0; v <= left; ++v) {
        j[pos] = v;
        self(self, pos + 1, left - v);
      }
    };
    recurse(recurse, 0, kSteps);
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<double> w(k, 0.0);
      w[i] = 1.0;
      weight_sets.push_back(std::move(w));
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        std::vector<double> w(k, 0.0);
        w[i] = w[j] = 0.5;
        weight_sets.push_back(std::move(w));
      }
    }
    weight_sets.push_back(std::vector<double>(k, 1.0 / static_cast<double>(k)));
  }
  for (const auto& w : weight_sets) test(w);
  return out;
}

ConditionCReport check_condition_C(const GameSpec& spec, const EnvelopeValue& env,
                                   const Box& box, const ConditionCOptions& options) {
  if (env.full_dim() != spec.state_dim()) throw Error("envelope does not match the game state");
  ConditionCReport report;
  report.note =
      "gradients of the sub-values are grid central differences; at points where a sub-value "
      "is not differentiable they approximate, not enumerate, the limiting superdifferential";
  for (const auto& x : sample_box(box, options.samples, options.seed)) {
    if (spec.in_target(x, TargetSpec::full())) continue;
    ++report.points;
    EnvelopeSample s = env.evaluate(x);
    if (s.active.size() < 2) continue;
    ++report.points_with_ties;
    std::vector<std::vector<double>> gradients;
    for (int i : s.active) gradients.push_back(env.component_gradient(i, x));
    ConvexityCheck c = check_convex_combinations(spec, x, gradients, options.full_simplex);
    if (c.worst_violation > options.tolerance) ++report.violations;
    if (c.worst_violation > report.worst_violation) {
      report.worst_violation = c.worst_violation;
      report.witness = ConditionCWitness{x, s.active, c.weights, gradients};
    }
  }
  report.pass = report.violations == 0;
  return report;
}

ConvergenceError::ConvergenceError(int subproblem, SolveReport report)
    : Error("subproblem " + std::to_string(subproblem + 1) + " did not converge in " +
            std::to_string(report.iterations) + " iterations (residual " +
            std::to_string(report.residual) + ")"),
      subproblem_(subproblem),
      report_(std::move(report)) {}

std::vector<TensorGrid> subgrids(const std::vector<SubProblem>& subproblems,
                                 const std::vector<Axis>& full_axes) {
  std::vector<TensorGrid> grids;
  for (const auto& sp : subproblems) {
    std::vector<Axis> axes;
    for (int c : sp.embedding) {
      if (c >= static_cast<int>(full_axes.size())) {
        throw GridError("no axis given for full coordinate x" + std::to_string(c + 1));
      }
      axes.push_back(full_axes[c]);
    }
    grids.emplace_back(std::move(axes));
  }
  return grids;
}

DecomposedSolution solve_decomposed(const GameSpec& spec, const SolveParams& params,
                                    const std::vector<TensorGrid>& grids,
                                    const ConditionCOptions& check) {
  std::vector<SubProblem> subs = decompose(spec);
  if (grids.size() != subs.size()) {
    throw GridError("expected " + std::to_string(subs.size()) + " sub-grids, got " +
                    std::to_string(grids.size()));
  }
  std::vector<EmbeddedField> parts;
  std::vector<SolveReport> reports;
  std::vector<std::string> keys;
  double spacing = 0.0;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    spacing = std::max(spacing, grids[i].max_spacing());
    // Identical reduced games on identical grids are solved once.
    const std::string key = game_key(subs[i].reduced, grids[i]);
    auto j = static_cast<std::size_t>(std::find(keys.begin(), keys.end(), key) - keys.begin());
    keys.push_back(key);
    if (j < i) {
      parts.push_back(EmbeddedField{parts[j].field, subs[i].embedding});
      reports.push_back(reports[j]);
      continue;
    }
    SolveParams p = params;
    p.target = subs[i].target;
    SolveResult r = solve_hji(subs[i].reduced, p, grids[i]);
    if (!r.report.converged) throw ConvergenceError(static_cast<int>(i), std::move(r.report));
    parts.push_back(EmbeddedField{std::move(r.field), subs[i].embedding});
    reports.push_back(std::move(r.report));
  }
  double delta = std::max(10.0 * params.tolerance, spacing);
  EnvelopeValue env(std::move(parts), spec.state_dim(), delta);
  ConditionCReport cond = check_condition_C(spec, env, env.box(), check);
  cond.structural_guarantee = true;
  return DecomposedSolution{std::move(subs), std::move(reports), std::move(env), std::move(cond)};
}

}  // namespace pedecomp
