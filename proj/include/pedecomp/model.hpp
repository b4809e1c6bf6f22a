#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pedecomp/box.hpp"
#include "pedecomp/fields.hpp"

namespace pedecomp {

// relative: state block i is the evader position minus pursuer i's position,
//   y_i' = -g_i(y) a_i + h_i(y) b + l_i(y), state dimension n*m.
// absolute: blocks 1..m are pursuer positions and block m+1 the evader,
//   y_i' = -g(y_i) a_i, y_e' = h(y_e) b, state dimension n*(m+1).
enum class CoordinateMode { kRelative, kAbsolute };

std::string to_string(CoordinateMode mode);
CoordinateMode coordinate_mode_from_string(const std::string& text);

// Which capture set the boundary condition is imposed on: the full target
// (any pursuer within r) or the sub-target of one pursuer.
struct TargetSpec {
  std::optional<int> pursuer;  // empty: full target

  static TargetSpec full() { return {}; }
  static TargetSpec sub(int index) { return {index}; }
};

// Field expressions of a game. In relative mode every field is an
// expression over the full state x1..x_{n*m}. In absolute mode g and h are
// expressions over one agent position x1..xn: g is evaluated at each
// pursuer's position and h at the evader's.
struct GameSpecParams {
  CoordinateMode mode = CoordinateMode::kRelative;
  int m = 1;
  int n = 1;
  double rho_a = 1.0;
  double rho_b = 1.0;
  double r = 0.0;
  std::vector<ScalarFieldExpr> g;               // m entries (1 allowed when shared)
  std::vector<ScalarFieldExpr> h;               // m entries relative, 1 absolute
  std::vector<std::vector<ScalarFieldExpr>> l;  // m x n, empty means zero drift
  std::optional<bool> shared_g;                 // defaults: true in absolute mode
};

// Coefficients of pursuer i's block at a given state.
struct BlockCoefficients {
  double g = 0.0;
  double h = 0.0;
  std::vector<double> l;  // n entries
};

// Immutable, validated description of an m-pursuer game.
class GameSpec {
 public:
  explicit GameSpec(GameSpecParams params);

  CoordinateMode mode() const { return p_.mode; }
  int m() const { return p_.m; }
  int n() const { return p_.n; }
  double rho_a() const { return p_.rho_a; }
  double rho_b() const { return p_.rho_b; }
  double r() const { return p_.r; }
  bool shared_g() const { return *p_.shared_g; }
  bool has_drift() const { return !p_.l.empty(); }

  const std::vector<ScalarFieldExpr>& g() const { return p_.g; }
  const std::vector<ScalarFieldExpr>& h() const { return p_.h; }
  const std::vector<std::vector<ScalarFieldExpr>>& l() const { return p_.l; }

  // n*m (relative) or n*(m+1) (absolute).
  int state_dim() const;
  // Number of n-blocks in the state vector (m or m+1).
  int block_count() const;
  // Number of variables field expressions are written over.
  int field_dim() const;

  BlockCoefficients coefficients(std::span<const double> x, int pursuer) const;

  // Distance that decides capture by pursuer i: |y_i| relative,
  // |y_i - y_e| absolute.
  double capture_distance(std::span<const double> x, int pursuer) const;
  // Minimum over pursuers, and the pursuer achieving it (lowest index).
  std::pair<double, int> min_capture_distance(std::span<const double> x) const;
  bool in_target(std::span<const double> x, const TargetSpec& target,
                 double slack = 0.0) const;

  void require_state(std::span<const double> x) const;

 private:
  GameSpecParams p_;
};

// a: m*n pursuer controls, block i in a[i*n .. i*n+n). b: n evader controls.
struct ControlPair {
  std::vector<double> a;
  std::vector<double> b;
};

// Checks the ball constraints |a_i| <= rho_a, |b| <= rho_b (1e-12 slack).
bool controls_admissible(const GameSpec& spec, const ControlPair& u, double slack = 1e-12);

std::vector<double> dynamics_rhs(const GameSpec& spec, std::span<const double> x,
                                 const ControlPair& u);

struct HypothesisReport {
  bool pass = false;
  double min_margin = 0.0;
  std::vector<double> worst_x;
  int worst_pursuer = -1;
  std::size_t samples = 0;
  // g_i <= 0 or h_i < 0 somewhere in the box.
  std::vector<std::string> sign_violations;
  // Non-finite field evaluation; the margin is meaningless when set.
  std::optional<std::string> spec_error;
};

// Samples g_i rho_a - h_i rho_b - |l_i| over a low-discrepancy set of
// `samples` points in `box` (a box of the full state space).
HypothesisReport check_hypothesis_H(const GameSpec& spec, const Box& box,
                                    std::size_t samples = 10000, std::uint64_t seed = 0);

}  // namespace pedecomp
