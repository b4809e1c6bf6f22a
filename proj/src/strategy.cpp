#include "pedecomp/strategy.hpp"

#include <cmath>

namespace pedecomp {

namespace {

double block_norm(std::span<const double> v, int begin, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += v[begin + k] * v[begin + k];
  return std::sqrt(s);
}

}  // namespace

FeedbackStrategy::FeedbackStrategy(const GameSpec& spec, const EnvelopeValue& env,
                                   FeedbackOptions options)
    : spec_(spec), env_(env), options_(options) {
  if (env.full_dim() != spec.state_dim()) {
    throw Error("envelope dimension " + std::to_string(env.full_dim()) +
                " does not match the state dimension " + std::to_string(spec.state_dim()));
  }
}

int FeedbackStrategy::selected_index(std::span<const double> x) const {
  if (options_.tie_tolerance <= 0.0) return env_.evaluate(x).argmin;
  return env_.active_set(x, options_.tie_tolerance).front();
}

std::vector<double> FeedbackStrategy::value_gradient(std::span<const double> x) const {
  return env_.component_gradient(static_cast<std::size_t>(selected_index(x)), x);
}

std::vector<double> FeedbackStrategy::pursuers_from(std::span<const double> x,
                                                    std::span<const double> p) const {
  const int m = spec_.m();
  const int n = spec_.n();
  std::vector<double> a(static_cast<std::size_t>(m) * n, 0.0);
  for (int i = 0; i < m; ++i) {
    const int begin = i * n;
    double pn = block_norm(p, begin, n);
    if (pn > options_.zero_gradient) {
      for (int k = 0; k < n; ++k) a[begin + k] = spec_.rho_a() * p[begin + k] / pn;
      continue;
    }
    std::vector<double> d(n);
    for (int k = 0; k < n; ++k) {
      d[k] = x[begin + k];
      if (spec_.mode() == CoordinateMode::kAbsolute) d[k] -= x[m * n + k];
    }
    double dn = block_norm(d, 0, n);
    if (dn > options_.zero_gradient) {
      for (int k = 0; k < n; ++k) a[begin + k] = spec_.rho_a() * d[k] / dn;
    }
  }
  return a;
}

std::vector<double> FeedbackStrategy::evader_from(std::span<const double> x,
                                                  std::span<const double> p) const {
  const int m = spec_.m();
  const int n = spec_.n();
  std::vector<double> q(n, 0.0);
  if (spec_.mode() == CoordinateMode::kRelative) {
    for (int i = 0; i < m; ++i) {
      double h = spec_.coefficients(x, i).h;
      for (int k = 0; k < n; ++k) q[k] += h * p[i * n + k];
    }
  } else {
    for (int k = 0; k < n; ++k) q[k] = p[m * n + k];
  }
  double qn = block_norm(q, 0, n);
  std::vector<double> b(n, 0.0);
  if (qn <= options_.zero_gradient) return b;
  for (int k = 0; k < n; ++k) b[k] = spec_.rho_b() * q[k] / qn;
  return b;
}

std::vector<double> FeedbackStrategy::pursuer_controls(std::span<const double> x) const {
  spec_.require_state(x);
  return pursuers_from(x, value_gradient(x));
}

std::vector<double> FeedbackStrategy::evader_control(std::span<const double> x) const {
  spec_.require_state(x);
  return evader_from(x, value_gradient(x));
}

ControlPair FeedbackStrategy::controls(std::span<const double> x) const {
  spec_.require_state(x);
  auto p = value_gradient(x);
  return ControlPair{pursuers_from(x, p), evader_from(x, p)};
}

std::vector<double> pursuer_feedback(const FeedbackStrategy& strategy, std::span<const double> x) {
  return strategy.pursuer_controls(x);
}

std::vector<double> evader_feedback(const FeedbackStrategy& strategy, std::span<const double> x) {
  return strategy.evader_control(x);
}

}  // namespace pedecomp
