#include "pedecomp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace pedecomp {

double kruzhkov(double t) {
  if (std::isinf(t) && t > 0) return 1.0;
  return -std::expm1(-t);
}

double kruzhkov_inverse(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError("Kruzhkov value outside [0, 1]", std::to_string(v));
  }
  if (v == 1.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-v);
}

double default_horizon(double value) {
  double t = kruzhkov_inverse(std::clamp(value, 0.0, 1.0));
  return std::clamp(3.0 * t, 1.0, 100.0);
}

Policies optimal_policies(const FeedbackStrategy& strategy) {
  return Policies{
      [&strategy](std::span<const double> x) { return strategy.pursuer_controls(x); },
      [&strategy](std::span<const double> x) { return strategy.evader_control(x); }};
}

ControlLaw constant_law(std::vector<double> value) {
  return [value = std::move(value)](std::span<const double>) { return value; };
}

ControlLaw zero_law(std::size_t size) { return constant_law(std::vector<double>(size, 0.0)); }

ControlLaw idle_pursuer(ControlLaw base, int index, int n) {
  return [base = std::move(base), index, n](std::span<const double> x) {
    auto a = base(x);
    for (int k = 0; k < n; ++k) a.at(static_cast<std::size_t>(index) * n + k) = 0.0;
    return a;
  };
}

namespace {

std::vector<double> advance(std::span<const double> x, std::span<const double> v, double tau) {
  std::vector<double> y(x.begin(), x.end());
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += tau * v[k];
  return y;
}

bool captured(const GameSpec& spec, std::span<const double> x) {
  return spec.min_capture_distance(x).first <= spec.r();
}

}  // namespace

Trajectory simulate(const GameSpec& spec, const Policies& policies, std::span<const double> x0,
                    double dt, double horizon, const std::optional<Box>& box) {
  spec.require_state(x0);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw SpecError("time step must be positive");
  if (!(horizon >= 0.0)) throw SpecError("horizon must be >= 0");

  Trajectory traj;
  traj.dt = dt;
  std::vector<double> x(x0.begin(), x0.end());
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  auto note_box = [&](const std::vector<double>& s) {
    if (box && !box->contains(s)) traj.left_box = true;
  };
  note_box(x);
  if (captured(spec, x)) {
    traj.outcome = Outcome::kCaptured;
    traj.captured_by = spec.min_capture_distance(x).second;
    traj.t_hit = 0.0;
    return traj;
  }

  const auto steps = static_cast<long>(std::ceil(horizon / dt - 1e-12));
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double step = std::min(dt, horizon - t);
    ControlPair u{policies.pursuers(x), policies.evader(x)};
    if (!controls_admissible(spec, u, 1e-9)) {
      throw SpecError("policy returned a control outside the admissible ball at t = " +
                      std::to_string(t));
    }
    auto v = dynamics_rhs(spec, x, u);
    auto next = advance(x, v, step);
    traj.controls.push_back(u);
    if (captured(spec, next)) {
      double lo = 0.0;
      double hi = step;
      while (hi - lo > dt / 100.0) {
        double mid = 0.5 * (lo + hi);
        if (captured(spec, advance(x, v, mid))) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      next = advance(x, v, hi);
      traj.times.push_back(t + hi);
      traj.states.push_back(next);
      note_box(next);
      traj.outcome = Outcome::kCaptured;
      traj.captured_by = spec.min_capture_distance(next).second;
      traj.t_hit = t + hi;
      return traj;
    }
    x = std::move(next);
    traj.times.push_back(t + step);
    traj.states.push_back(x);
    note_box(x);
  }
  return traj;
}

void write_trajectory_csv(std::ostream& out, const GameSpec& spec, const Trajectory& traj) {
  const int d = spec.state_dim();
  const int na = spec.m() * spec.n();
  const int nb = spec.n();
  out << "t";
  for (int k = 1; k <= d; ++k) out << ",x" << k;
  for (int k = 1; k <= na; ++k) out << ",a" << k;
  for (int k = 1; k <= nb; ++k) out << ",b" << k;
  out << ",dmin\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out << buf;
  };
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    put(traj.times[s]);
    for (double v : traj.states[s]) {
      out << ',';
      put(v);
    }
    // the last state carries no control
    if (s < traj.controls.size()) {
      for (double v : traj.controls[s].a) {
        out << ',';
        put(v);
      }
      for (double v : traj.controls[s].b) {
        out << ',';
        put(v);
      }
    } else {
      for (int k = 0; k < na + nb; ++k) out << ',';
    }
    out << ',';
    put(spec.min_capture_distance(traj.states[s]).first);
    out << '\n';
  }
}

}  // namespace pedecomp
