// pe-decomp: check, solve, decompose, simulate and slice pursuit-evasion
// games described by a JSON run configuration.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "pedecomp/config.hpp"
#include "pedecomp/decomp.hpp"
#include "pedecomp/levelsets.hpp"
#include "pedecomp/sim.hpp"
#include "pedecomp/solver.hpp"
#include "pedecomp/strategy.hpp"
#include "pedecomp/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pedecomp;

namespace {

enum ExitCode {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kHypothesis = 3,
  kNotDecomposable = 4,
  kBudget = 5,
  kNoConvergence = 6,
  kIo = 7,
  kFieldDomain = 8,
};

struct Options {
  std::string config_path;
  std::optional<std::string> out_dir;
  unsigned threads = 1;
  double budget = 2e7;
  std::uint64_t seed = 0;
};

struct Run {
  Options opts;
  std::string command;
  RunConfig config;
  fs::path out;
  json meta = json::object();
  json artifacts = json::array();
  int status = kOk;

  void write_text(const fs::path& name, const std::string& kind,
                  const std::function<void(std::ostream&)>& body) {
    fs::path path = out / name;
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path.string());
    body(f);
    if (!f) throw IoError("failed writing " + path.string());
    artifacts.push_back({{"kind", kind}, {"path", name.string()}});
  }
};

void write_json(const fs::path& path, const json& doc) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path.string());
  f << doc.dump(2) << '\n';
}

// Value function used by simulate and levelsets: an envelope of sub-values,
// or a single full-state field wrapped as a one-part envelope.
struct Values {
  std::optional<DecomposedSolution> decomposed;
  std::optional<EnvelopeValue> direct;
  const EnvelopeValue& envelope() const { return decomposed ? decomposed->envelope : *direct; }
};

void require_budget(const RunConfig& config, double budget) {
  double nodes = TensorGrid::node_count(config.solve.axes);
  if (nodes > budget) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "full-dimensional grid needs %.6g nodes, budget is %.6g (--budget)", nodes,
                  budget);
    throw BudgetError(msg, nodes, budget);
  }
}

EnvelopeValue solve_direct(Run& run, const GameSpec& spec) {
  require_budget(run.config, run.opts.budget);
  SolveParams params = build_solve_params(run.config, run.opts.threads);
  SolveResult result = solve_hji(spec, params, TensorGrid(run.config.solve.axes));
  run.meta["reports"]["solve"] = to_json(result.report);
  if (run.config.output.value_dumps) {
    run.write_text("value.grid", "value_dump",
                   [&](std::ostream& o) { write_value_dump(o, result.field); });
  }
  if (!result.report.converged) run.status = kNoConvergence;
  std::vector<int> identity(spec.state_dim());
  for (int k = 0; k < spec.state_dim(); ++k) identity[k] = k;
  return envelope({EmbeddedField{std::move(result.field), identity}}, spec.state_dim(),
                  std::max(10.0 * params.tolerance, TensorGrid(run.config.solve.axes).max_spacing()));
}

DecomposedSolution solve_split(Run& run, const GameSpec& spec) {
  SolveParams params = build_solve_params(run.config, run.opts.threads);
  auto subs = decompose(spec);
  auto grids = subgrids(subs, run.config.solve.axes);
  ConditionCOptions check;
  check.samples = run.config.decompose.condition_c_samples;
  check.full_simplex = run.config.decompose.full_simplex;
  check.seed = run.opts.seed;
  DecomposedSolution sol = solve_decomposed(spec, params, grids, check);

  json subs_json = json::array();
  for (std::size_t i = 0; i < sol.subproblems.size(); ++i) {
    const auto& sp = sol.subproblems[i];
    std::vector<int> embedding;
    for (int c : sp.embedding) embedding.push_back(c + 1);
    json entry = {{"index", sp.index + 1},
                  {"embedding", embedding},
                  {"report", to_json(sol.reports[i])}};
    if (run.config.output.value_dumps) {
      std::string name = "sub_" + std::to_string(i + 1) + ".grid";
      run.write_text(name, "value_dump",
                     [&](std::ostream& o) { write_value_dump(o, sol.envelope.parts()[i].field); });
      entry["dump"] = name;
    }
    subs_json.push_back(std::move(entry));
  }
  Box box = sol.envelope.box();
  run.meta["reports"]["subproblems"] = subs_json;
  run.meta["reports"]["envelope"] = {
      {"delta", sol.envelope.delta()}, {"box_lo", box.lo}, {"box_hi", box.hi}};
  run.meta["reports"]["condition_c"] = to_json(sol.condition_c);
  return sol;
}

Values compute_values(Run& run, const GameSpec& spec) {
  Values v;
  if (run.config.decompose.enabled) {
    v.decomposed.emplace(solve_split(run, spec));
  } else {
    v.direct.emplace(solve_direct(run, spec));
  }
  return v;
}

ControlLaw make_law(const PolicyChoice& choice, ControlLaw optimal, std::size_t size,
                    const std::string& who) {
  if (std::holds_alternative<std::string>(choice)) {
    return std::get<std::string>(choice) == "zero" ? zero_law(size) : std::move(optimal);
  }
  const auto& fixed = std::get<std::vector<double>>(choice);
  if (fixed.size() != size) {
    throw SpecError("simulate." + who + ": expected " + std::to_string(size) + " control values");
  }
  return constant_law(fixed);
}

int cmd_check(Run& run) {
  GameSpec spec = build_game(run.config);
  Box box = solve_box(run.config);
  HypothesisReport h = check_hypothesis_H(spec, box, run.config.solve.hypothesis_samples,
                                          run.opts.seed);
  run.meta["reports"]["hypothesis"] = to_json(h);
  json decomp = {{"decomposable", true}, {"reason", nullptr}};
  try {
    auto subs = decompose(spec);
    decomp["subproblems"] = subs.size();
  } catch (const DecompositionError& e) {
    decomp["decomposable"] = false;
    decomp["reason"] = e.what();
  }
  run.meta["reports"]["decomposition"] = decomp;
  run.meta["reports"]["full_grid_nodes"] = TensorGrid::node_count(run.config.solve.axes);
  std::cout << "hypothesis (H): " << (h.pass ? "pass" : "FAIL") << " (min margin "
            << h.min_margin << " over " << h.samples << " samples)\n";
  std::cout << "decomposable:   " << (decomp["decomposable"].get<bool>() ? "yes" : "no") << '\n';
  if (!h.pass) return kHypothesis;
  if (!decomp["decomposable"].get<bool>()) return kNotDecomposable;
  return kOk;
}

int cmd_solve(Run& run) {
  GameSpec spec = build_game(run.config);
  solve_direct(run, spec);
  const json& r = run.meta["reports"]["solve"];
  std::cout << "solve: " << (r["converged"].get<bool>() ? "converged" : "NOT converged")
            << " after " << r["iterations"] << " sweeps (residual " << r["residual"] << ")\n";
  return run.status;
}

int cmd_decompose(Run& run) {
  GameSpec spec = build_game(run.config);
  DecomposedSolution sol = solve_split(run, spec);
  std::cout << "decompose: " << sol.subproblems.size() << " subproblems solved; condition (C) "
            << (sol.condition_c.pass ? "pass" : "FAIL") << " (" << sol.condition_c.violations
            << " violations at " << sol.condition_c.points_with_ties << " tie points)\n";
  return kOk;
}

int cmd_simulate(Run& run) {
  GameSpec spec = build_game(run.config);
  Values values = compute_values(run, spec);
  if (run.status != kOk) return run.status;
  const EnvelopeValue& env = values.envelope();
  FeedbackStrategy strategy(spec, env);
  Policies optimal = optimal_policies(strategy);
  const auto& sim = run.config.simulate;
  const std::size_t na = static_cast<std::size_t>(spec.m() * spec.n());
  Policies policies{make_law(sim.pursuers, optimal.pursuers, na, "pursuers"),
                    make_law(sim.evader, optimal.evader, static_cast<std::size_t>(spec.n()),
                             "evader")};
  for (int idle : sim.idle_pursuers) {
    if (idle < 1 || idle > spec.m()) {
      throw SpecError("simulate.idle_pursuers: " + std::to_string(idle) + " outside 1.." +
                      std::to_string(spec.m()));
    }
    policies.pursuers = idle_pursuer(std::move(policies.pursuers), idle - 1, spec.n());
  }
  Box box = env.box();
  json runs = json::array();
  for (std::size_t k = 0; k < sim.starts.size(); ++k) {
    const auto& x0 = sim.starts[k];
    double v = env.value(x0);
    double horizon = sim.horizon ? *sim.horizon : default_horizon(v);
    Trajectory traj = simulate(spec, policies, x0, sim.dt, horizon, box);
    json entry = {{"start", x0},
                  {"value", v},
                  {"value_time", kruzhkov_inverse(v)},
                  {"horizon", horizon},
                  {"steps", traj.controls.size()},
                  {"left_box", traj.left_box}};
    if (traj.outcome == Outcome::kCaptured) {
      entry["status"] = "captured";
      entry["captured_by"] = traj.captured_by + 1;
      entry["t_hit"] = traj.t_hit;
    } else {
      entry["status"] = "escaped";
      entry["t_hit"] = nullptr;
    }
    if (run.config.output.trajectories) {
      std::string name = "trajectory_" + std::to_string(k + 1) + ".csv";
      run.write_text(name, "trajectory",
                     [&](std::ostream& o) { write_trajectory_csv(o, spec, traj); });
      entry["file"] = name;
    }
    std::cout << "start " << k + 1 << ": " << entry["status"].get<std::string>();
    if (traj.outcome == Outcome::kCaptured) {
      std::cout << " by pursuer " << traj.captured_by + 1 << " at t = " << traj.t_hit;
    }
    std::cout << " (value time " << kruzhkov_inverse(v) << ")\n";
    runs.push_back(std::move(entry));
  }
  run.meta["reports"]["trajectories"] = runs;
  return kOk;
}

int cmd_levelsets(Run& run) {
  GameSpec spec = build_game(run.config);
  if (spec.state_dim() < 2) throw SpecError("levelsets: the state needs at least two coordinates");
  Values values = compute_values(run, spec);
  if (run.status != kOk) return run.status;
  const auto& ls = run.config.levelsets;
  Slice slice;
  slice.axis_x = ls.axis_x - 1;
  slice.axis_y = ls.axis_y - 1;
  slice.x = run.config.solve.axes[slice.axis_x];
  slice.y = run.config.solve.axes[slice.axis_y];
  slice.x.count = slice.y.count = ls.resolution;
  slice.anchor = ls.anchor;
  const EnvelopeValue& env = values.envelope();
  auto lines = level_sets([&](std::span<const double> x) { return env.value(x); }, slice,
                          ls.levels);
  if (run.config.output.levelsets) {
    run.write_text("levelsets.csv", "levelsets",
                   [&](std::ostream& o) { write_levelsets_csv(o, slice, lines); });
  }
  run.meta["reports"]["levelsets"] = {{"polylines", lines.size()}, {"levels", ls.levels}};
  std::cout << "levelsets: " << lines.size() << " polylines\n";
  return kOk;
}

json error_record(const std::string& kind, int code, const std::string& message) {
  return {{"error", kind}, {"exit_code", code}, {"message", message}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pursuit-evasion value functions by target decomposition", "pe-decomp"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Options opts;
  opts.threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--config", opts.config_path, "run configuration (JSON)")->required();
  app.add_option("--out", opts.out_dir, "output directory (overrides output.dir)");
  app.add_option("--threads", opts.threads, "worker threads for solver sweeps")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget", opts.budget, "node budget for full-dimensional grids")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", opts.seed, "seed offset for sampled checks");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"check", "test hypothesis (H) and decomposability"},
      {"solve", "direct full-dimensional solve"},
      {"decompose", "per-pursuer solves, envelope and condition (C)"},
      {"simulate", "closed-loop trajectories"},
      {"levelsets", "contours of the value on a 2D slice"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    if (code == 0) return kOk;
    std::cerr << error_record("usage", kUsage, e.what()).dump() << '\n';
    return kUsage;
  }

  Run run;
  run.opts = opts;
  run.command = app.get_subcommands().front()->get_name();
  run.meta = {{"version", std::string(kVersion)},
              {"subcommand", run.command},
              {"threads", opts.threads},
              {"budget", opts.budget},
              {"seed", opts.seed},
              {"reports", json::object()}};

  std::string kind;
  std::string message;
  json details = json::object();
  int code = kOk;
  try {
    run.config = load_run_config(opts.config_path);
    if (opts.out_dir) run.config.output.dir = *opts.out_dir;
    run.meta["config"] = to_json(run.config);
    run.out = run.config.output.dir;
    std::error_code ec;
    fs::create_directories(run.out, ec);
    if (ec) throw IoError("cannot create output directory " + run.out.string());

    if (run.command == "check") code = cmd_check(run);
    else if (run.command == "solve") code = cmd_solve(run);
    else if (run.command == "decompose") code = cmd_decompose(run);
    else if (run.command == "simulate") code = cmd_simulate(run);
    else code = cmd_levelsets(run);
  } catch (const HypothesisError& e) {
    kind = "hypothesis";
    code = kHypothesis;
    message = e.what();
    details = to_json(e.report());
  } catch (const DecompositionError& e) {
    kind = "not_decomposable";
    code = kNotDecomposable;
    message = e.what();
  } catch (const BudgetError& e) {
    kind = "budget";
    code = kBudget;
    message = e.what();
    details = {{"nodes", e.nodes()}, {"budget", e.budget()}};
  } catch (const ConvergenceError& e) {
    kind = "no_convergence";
    code = kNoConvergence;
    message = e.what();
    details = {{"subproblem", e.subproblem() + 1}, {"report", to_json(e.report())}};
  } catch (const IoError& e) {
    kind = "io";
    code = kIo;
    message = e.what();
  } catch (const DomainError& e) {
    kind = "field_domain";
    code = kFieldDomain;
    message = e.what();
    details = {{"subexpression", e.subexpression()}};
  } catch (const ParseError& e) {
    kind = "config";
    code = kUsage;
    message = e.what();
    details = {{"offset", e.offset()}};
  } catch (const SpecError& e) {
    kind = "config";
    code = kUsage;
    message = e.what();
  } catch (const GridError& e) {
    kind = "grid";
    code = kUsage;
    message = e.what();
  } catch (const std::exception& e) {
    kind = "internal";
    code = kInternal;
    message = e.what();
  }

  if (code == kNoConvergence && kind.empty()) {
    kind = "no_convergence";
    message = "solve stopped at max_iterations before reaching the tolerance";
  }
  run.meta["status"] = code == kOk ? "ok" : "error";
  run.meta["exit_code"] = code;
  run.meta["artifacts"] = run.artifacts;
  if (!kind.empty()) {
    json record = error_record(kind, code, message);
    if (!details.empty()) record["details"] = details;
    run.meta["error"] = record;
    std::cerr << record.dump() << '\n';
    std::cerr << "error: " << message << '\n';
  }
  if (!run.out.empty()) {
    try {
      if (!kind.empty()) write_json(run.out / "error.json", run.meta["error"]);
      write_json(run.out / "metadata.json", run.meta);
    } catch (const IoError& e) {
      std::cerr << error_record("io", kIo, e.what()).dump() << '\n';
      if (code == kOk) code = kIo;
    }
  }
  return code;
}
