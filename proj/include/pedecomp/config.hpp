#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pedecomp/decomp.hpp"
#include "pedecomp/grid.hpp"
#include "pedecomp/levelsets.hpp"
#include "pedecomp/model.hpp"
#include "pedecomp/solver.hpp"

namespace pedecomp {

struct GameSection {
  std::string mode = "relative";
  int m = 1;
  int n = 1;
  double rho_a = 1.0;
  double rho_b = 1.0;
  double r = 0.1;
  std::vector<std::string> g{"1"};
  std::vector<std::string> h{"0"};
  std::vector<std::vector<std::string>> l;  // empty: no drift
  std::optional<bool> shared_g;
};

struct SolveSection {
  std::vector<Axis> axes;  // one per full-state coordinate
  std::optional<double> time_step;
  int control_samples = 0;
  double tolerance = 1e-6;
  long max_iterations = 100000;
  bool evader_outer = true;
  std::size_t hypothesis_samples = 10000;
};

struct DecomposeSection {
  bool enabled = true;
  std::size_t condition_c_samples = 2000;
  bool full_simplex = false;
};

// "optimal", "zero", or a fixed control vector.
using PolicyChoice = std::variant<std::string, std::vector<double>>;

struct SimulateSection {
  std::vector<std::vector<double>> starts;
  double dt = 1e-3;
  std::optional<double> horizon;
  PolicyChoice pursuers = std::string("optimal");
  PolicyChoice evader = std::string("optimal");
  std::vector<int> idle_pursuers;  // 1-based
};

struct LevelsetsSection {
  int axis_x = 1;  // 1-based
  int axis_y = 2;
  std::vector<double> anchor;  // defaults to the box centre
  std::size_t resolution = 121;
  std::vector<double> levels;  // defaults to psi(0.5), psi(1), ..., psi(4)
};

struct OutputSection {
  std::string dir = "out";
  bool value_dumps = true;
  bool trajectories = true;
  bool levelsets = true;
};

struct RunConfig {
  GameSection game;
  SolveSection solve;
  DecomposeSection decompose;
  SimulateSection simulate;
  LevelsetsSection levelsets;
  OutputSection output;
};

// Strict parse: unknown keys, wrong types and missing required entries
// (game.m, game.n, game.g, game.h, solve.axes) throw SpecError with the
// offending JSON path.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);
// Fully resolved document, defaults included.
nlohmann::json to_json(const RunConfig& config);

GameSpec build_game(const RunConfig& config);
SolveParams build_solve_params(const RunConfig& config, unsigned threads);
Box solve_box(const RunConfig& config);

nlohmann::json to_json(const HypothesisReport& report);
nlohmann::json to_json(const SolveReport& report);
nlohmann::json to_json(const ConditionCReport& report);

}  // namespace pedecomp
