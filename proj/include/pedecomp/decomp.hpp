#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pedecomp/grid.hpp"
#include "pedecomp/model.hpp"
#include "pedecomp/solver.hpp"

namespace pedecomp {

// Game against a single sub-target |y_i| <= r (relative) or
// |y_i - y_e| <= r (absolute), posed on the coordinates it depends on.
struct SubProblem {
  int index = 0;
  GameSpec reduced;
  // reduced coordinate k reads full coordinate embedding[k]
  std::vector<int> embedding;
  TargetSpec target = TargetSpec::sub(0);
};

// Splits the capture set into per-pursuer sub-targets and reduces each game.
// Relative mode requires every field of pursuer i to depend on block i only;
// the offending variable is named otherwise.
std::vector<SubProblem> decompose(const GameSpec& spec);

struct EmbeddedField {
  ValueField field;
  std::vector<int> embedding;
};

struct EnvelopeSample {
  double value = 1.0;
  int argmin = 0;           // lowest index attaining the minimum
  std::vector<int> active;  // indices within delta of the minimum
  bool clamped = false;
};

// Lower envelope u(x) = min_i u_i(x) of embedded sub-value fields.
class EnvelopeValue {
 public:
  EnvelopeValue(std::vector<EmbeddedField> parts, int full_dim, double delta);

  std::size_t size() const { return parts_.size(); }
  int full_dim() const { return full_dim_; }
  double delta() const { return delta_; }
  const std::vector<EmbeddedField>& parts() const { return parts_; }

  EnvelopeSample evaluate(std::span<const double> x) const;
  double value(std::span<const double> x) const { return evaluate(x).value; }
  // Active set with a caller-chosen tolerance instead of delta.
  std::vector<int> active_set(std::span<const double> x, double tolerance) const;

  Interpolated component(std::size_t i, std::span<const double> x) const;
  // Gradient of u_i scattered into full-state coordinates.
  std::vector<double> component_gradient(std::size_t i, std::span<const double> x) const;

  // Full-state box covered by every embedded grid.
  Box box() const;

 private:
  std::vector<double> gather(std::size_t i, std::span<const double> x) const;

  std::vector<EmbeddedField> parts_;
  int full_dim_;
  double delta_;
};

// delta defaults to the largest sub-grid spacing (but at least 1e-5).
EnvelopeValue envelope(std::vector<EmbeddedField> subfields, int full_dim,
                       std::optional<double> delta = std::nullopt);

struct ConvexityCheck {
  double worst_violation = 0.0;  // max of H(sum l_i xi_i) - sum l_i H(xi_i)
  std::vector<double> weights;   // convex weights attaining it
};

// Tests H(x, sum_i w_i xi_i) <= sum_i w_i H(x, xi_i) over the vertices,
// pairwise midpoints and the uniform weight (or a 1/10 simplex lattice when
// full_simplex is set).
ConvexityCheck check_convex_combinations(const GameSpec& spec, std::span<const double> x,
                                         const std::vector<std::vector<double>>& gradients,
                                         bool full_simplex = false);

struct ConditionCWitness {
  std::vector<double> x;
  std::vector<int> active;
  std::vector<double> weights;
  std::vector<std::vector<double>> gradients;
};

struct ConditionCOptions {
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  bool full_simplex = false;
  double tolerance = 1e-9;
};

struct ConditionCReport {
  bool pass = true;
  std::size_t points = 0;            // sampled points outside the target
  std::size_t points_with_ties = 0;  // active set of size >= 2
  std::size_t violations = 0;
  double worst_violation = 0.0;
  std::optional<ConditionCWitness> witness;
  // The decomposition theorem's hypotheses were verified syntactically.
  bool structural_guarantee = false;
  std::string note;
};

ConditionCReport check_condition_C(const GameSpec& spec, const EnvelopeValue& env,
                                   const Box& box, const ConditionCOptions& options = {});

struct DecomposedSolution {
  std::vector<SubProblem> subproblems;
  std::vector<SolveReport> reports;
  EnvelopeValue envelope;
  ConditionCReport condition_c;
};

// Raised when a subproblem solve hits max_iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(int subproblem, SolveReport report);
  int subproblem() const { return subproblem_; }
  const SolveReport& report() const { return report_; }

 private:
  int subproblem_;
  SolveReport report_;
};

// Per-subproblem grids taken from one axis per full-state coordinate.
std::vector<TensorGrid> subgrids(const std::vector<SubProblem>& subproblems,
                                 const std::vector<Axis>& full_axes);

// Solves every subproblem on its grid, builds the envelope with
// delta = max(10 * tolerance, largest spacing) and checks condition (C).
DecomposedSolution solve_decomposed(const GameSpec& spec, const SolveParams& params,
                                    const std::vector<TensorGrid>& grids,
                                    const ConditionCOptions& check = {});

}  // namespace pedecomp
