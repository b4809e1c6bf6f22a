#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "pedecomp/box.hpp"
#include "pedecomp/model.hpp"
#include "pedecomp/strategy.hpp"

namespace pedecomp {

// psi(t) = 1 - exp(-t), psi(inf) = 1.
double kruzhkov(double t);
// Inverse on [0, 1]; 1 maps to +inf. Throws DomainError outside [0, 1].
double kruzhkov_inverse(double v);

// 3 * psi^{-1}(v) clamped to [1, 100].
double default_horizon(double value);

using ControlLaw = std::function<std::vector<double>(std::span<const double>)>;

struct Policies {
  ControlLaw pursuers;  // returns m*n values
  ControlLaw evader;    // returns n values
};

Policies optimal_policies(const FeedbackStrategy& strategy);
ControlLaw constant_law(std::vector<double> value);
ControlLaw zero_law(std::size_t size);
// Wraps a pursuer law so that pursuer `index` stays idle.
ControlLaw idle_pursuer(ControlLaw base, int index, int n);

enum class Outcome { kCaptured, kEscaped };

struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<ControlPair> controls;  // controls applied on [times[k], times[k+1])
  Outcome outcome = Outcome::kEscaped;
  int captured_by = -1;
  double t_hit = std::numeric_limits<double>::infinity();
  bool left_box = false;
};

// Explicit Euler with feedback held over each step. When a step ends inside
// the target the crossing time is refined by bisection to dt / 100.
Trajectory simulate(const GameSpec& spec, const Policies& policies, std::span<const double> x0,
                    double dt, double horizon, const std::optional<Box>& box = std::nullopt);

// CSV with columns t, x1..xd, a1..a_{mn}, b1..bn, dmin. Control cells of
// the final row are empty.
void write_trajectory_csv(std::ostream& out, const GameSpec& spec, const Trajectory& traj);

}  // namespace pedecomp
