#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pedecomp/errors.hpp"
#include "pedecomp/grid.hpp"
#include "pedecomp/model.hpp"

namespace pedecomp {

struct SolveParams {
  // Defaults to 0.8 * min spacing / max speed bound over the grid.
  std::optional<double> time_step;
  // Points per control sphere; 0 picks 2 for n = 1 and 32 otherwise.
  int control_samples = 0;
  double tolerance = 1e-6;
  long max_iterations = 100000;
  TargetSpec target = TargetSpec::full();
  // false swaps the sampled max/min order (pursuer outer, evader inner).
  bool evader_outer = true;
  unsigned threads = 1;
  std::size_t hypothesis_samples = 10000;
  // Single-pursuer absolute games may evaluate foot points in two tensor
  // stages (evader axes, then pursuer axes). Same result, fewer loads.
  bool allow_separable = true;
  // Entries (corner weights) allowed for precomputed foot-point stencils;
  // 0 disables the cache.
  std::size_t stencil_cache_limit = std::size_t{1} << 21;
};

struct SolveReport {
  bool converged = false;
  long iterations = 0;
  double residual = 0.0;
  double time_step = 0.0;
  int control_samples = 0;
  double wall_seconds = 0.0;
  std::size_t nodes = 0;
  std::size_t target_nodes = 0;
  // L-infinity change of each sweep.
  std::vector<double> residual_history;
  // Largest pointwise increase seen across all sweeps (0 for monotone runs).
  double max_increase = 0.0;
  double min_value = 1.0;
  double max_value = 0.0;
};

struct SolveResult {
  ValueField field;
  SolveReport report;
};

// Raised when a solve is refused because hypothesis (H) fails on the grid box.
class HypothesisError : public Error {
 public:
  explicit HypothesisError(HypothesisReport report);
  const HypothesisReport& report() const { return report_; }

 private:
  HypothesisReport report_;
};

// rho_a sum_i g_i |p_i| - rho_b |sum_i h_i p_i| - sum_i l_i . p_i - 1 in
// relative mode; rho_a sum_i g(y_i) |p_i| - rho_b h(y_e) |p_e| - 1 in
// absolute mode. p has the full state dimension; block norms are Euclidean.
double hamiltonian(const GameSpec& spec, std::span<const double> x, std::span<const double> p);

// Sample points on the sphere of radius `radius` in R^n. n = 1 always yields
// {-radius, +radius}; n = 2 uses equally spaced angles; n >= 3 a Fibonacci
// lattice.
std::vector<std::vector<double>> sphere_samples(int n, int count, double radius);

// Semi-Lagrangian dynamic programming operator on a fixed grid:
//   u(x) <- max_b min_a [ e^{-dt} u(x + dt f(x, a, b)) + 1 - e^{-dt} ]
// with u = 0 on the target. A foot point inside the exact target is not
// interpolated: the step is charged only up to the time the straight path
// enters the target. Coefficient fields are evaluated once per node.
class BellmanOperator {
 public:
  BellmanOperator(const GameSpec& spec, const SolveParams& params, const TensorGrid& grid);

  double time_step() const { return dt_; }
  int control_samples() const { return samples_; }
  bool is_target(std::size_t node) const { return target_[node] != 0; }
  std::size_t target_count() const;
  const TensorGrid& grid() const { return grid_; }
  bool uses_separable_path() const { return separable_; }
  // Foot-point stencils precomputed once and reused by every sweep.
  bool uses_stencil_cache() const { return !cache_fixed_.empty(); }

  // New value at `node` computed from the previous iterate `prev`.
  double update(std::span<const double> prev, std::size_t node) const;

 private:
  double update_separable(std::span<const double> prev, std::size_t node) const;
  double update_cached(std::span<const double> prev, std::size_t node) const;
  void build_stencil_cache();
  void foot_point(std::span<const double> x, std::size_t node, std::span<const double> b,
                  std::span<const std::size_t> combo, std::span<double> foot) const;
  double foot_value(std::span<const double> prev, std::span<const double> x, std::size_t node,
                    std::span<const double> b, std::span<const std::size_t> combo,
                    std::span<double> foot) const;
  // Foot point inside the target: the path enters it after tau <= dt, which
  // the update turns into 1 - e^{-tau}.
  double captured_value(std::span<const double> x, std::span<const double> foot) const;
  double entry_value(double tau) const { return 1.0 - std::exp(dt_ - tau); }

  const GameSpec& spec_;
  TensorGrid grid_;
  bool evader_outer_;
  bool separable_ = false;
  int samples_ = 2;
  double dt_ = 0.0;
  double decay_ = 1.0;
  std::vector<std::vector<double>> pursuer_controls_;
  std::vector<std::vector<double>> evader_controls_;
  std::vector<double> g_;  // node * m + i
  std::vector<double> h_;  // node * m + i (relative) or node (absolute)
  std::vector<double> l_;  // (node * m + i) * n + k, empty without drift
  std::vector<char> target_;
  TargetSpec target_spec_;
  double target_slack_ = 0.0;
  // One entry per (node, evader sample, joint pursuer sample), evader-major.
  // cache_fixed_ holds the value of captured feet and NaN otherwise.
  std::size_t combos_ = 1;
  std::size_t corners_ = 1;
  std::vector<double> cache_fixed_;
  std::vector<std::uint32_t> cache_index_;
  std::vector<double> cache_weight_;
};

// One Bellman update at a node given as a multi-index; target nodes map to 0.
double bellman_update(const GameSpec& spec, const SolveParams& params, const ValueField& field,
                      std::span<const std::size_t> node);

// Jacobi fixed-point iteration from 0 on the target and 1 elsewhere.
// Throws HypothesisError when (H) fails on the grid box and GridError when
// the capture radius is not resolved by the grid.
SolveResult solve_hji(const GameSpec& spec, const SolveParams& params, const TensorGrid& grid);

}  // namespace pedecomp
