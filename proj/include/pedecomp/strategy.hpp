#pragma once

#include <span>
#include <vector>

#include "pedecomp/decomp.hpp"
#include "pedecomp/model.hpp"

namespace pedecomp {

struct FeedbackOptions {
  // Below this norm a gradient block counts as zero.
  double zero_gradient = 1e-8;
  // Sub-values within this of the minimum are tied; the lowest index wins.
  double tie_tolerance = 0.0;
};

// Feedback laws read off the envelope gradient. The gradient is that of the
// lowest-index sub-value attaining the minimum.
class FeedbackStrategy {
 public:
  FeedbackStrategy(const GameSpec& spec, const EnvelopeValue& env, FeedbackOptions options = {});

  const GameSpec& spec() const { return spec_; }
  const EnvelopeValue& envelope() const { return env_; }

  int selected_index(std::span<const double> x) const;
  std::vector<double> value_gradient(std::span<const double> x) const;

  // a_i = rho_a p_i / |p_i|. A pursuer whose block gradient vanishes uses
  // the direction of its block x_i (relative) or x_i - x_e (absolute), which
  // closes the distance; zero when that vector is below the threshold.
  std::vector<double> pursuer_controls(std::span<const double> x) const;
  // b = rho_b q / |q| with q = sum_i h_i p_i (relative) or p_e (absolute);
  // zero when |q| is below the threshold.
  std::vector<double> evader_control(std::span<const double> x) const;
  ControlPair controls(std::span<const double> x) const;

 private:
  std::vector<double> pursuers_from(std::span<const double> x, std::span<const double> p) const;
  std::vector<double> evader_from(std::span<const double> x, std::span<const double> p) const;

  const GameSpec& spec_;
  const EnvelopeValue& env_;
  FeedbackOptions options_;
};

std::vector<double> pursuer_feedback(const FeedbackStrategy& strategy, std::span<const double> x);
std::vector<double> evader_feedback(const FeedbackStrategy& strategy, std::span<const double> x);

}  // namespace pedecomp
