#include "pedecomp/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "pedecomp/errors.hpp"

namespace pedecomp {

using nlohmann::json;

namespace {

// Reads one JSON object, remembering which keys were consumed so the rest
// can be rejected.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SpecError(path_ + ": expected an object");
  }

  // Marks the key as consumed; null counts as absent.
  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw SpecError(where(key) + ": required");
    return j_.at(key);
  }

  template <class T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    if (!has(key)) return;
    out = convert<T>(j_.at(key), where(key));
  }

  template <class T>
  void read(const std::string& key, std::optional<T>& out) {
    seen_.insert(key);
    if (!has(key)) return;
    out = convert<T>(j_.at(key), where(key));
  }

  template <class T>
  T require(const std::string& key) {
    return convert<T>(at(key), where(key));
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw SpecError(where(key) + ": unknown key");
    }
  }

  template <class T>
  static T convert(const json& v, const std::string& path) {
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw SpecError(path + ": expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw SpecError(path + ": expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.get<long long>() < 0) throw SpecError(path + ": expected a non-negative integer");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw SpecError(path + ": expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw SpecError(path + ": expected a string");
      }
      return v.get<T>();
    } catch (const json::exception& e) {
      throw SpecError(path + ": " + e.what());
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// A string or a list of strings.
std::vector<std::string> string_list(const json& v, const std::string& path) {
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) throw SpecError(path + ": expected a string or a list of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(Section::convert<std::string>(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw SpecError(path + ": expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(Section::convert<double>(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Axis parse_axis(const json& v, const std::string& path) {
  Section s(v, path);
  Axis a;
  a.lo = s.require<double>("lo");
  a.hi = s.require<double>("hi");
  a.count = s.require<std::size_t>("count");
  s.finish();
  if (!(a.hi > a.lo)) throw SpecError(path + ": hi must exceed lo");
  if (a.count < 2) throw SpecError(path + ": count must be >= 2");
  return a;
}

PolicyChoice parse_policy(const json& v, const std::string& path) {
  if (v.is_string()) {
    auto text = v.get<std::string>();
    if (text != "optimal" && text != "zero") {
      throw SpecError(path + ": expected \"optimal\", \"zero\" or a control vector");
    }
    return text;
  }
  return number_list(v, path);
}

json policy_json(const PolicyChoice& p) {
  if (std::holds_alternative<std::string>(p)) return std::get<std::string>(p);
  return std::get<std::vector<double>>(p);
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

RunConfig parse_run_config(const json& doc) {
  RunConfig c;
  Section root(doc, "config");

  {
    Section s(root.at("game"), "game");
    s.read("mode", c.game.mode);
    c.game.m = s.require<int>("m");
    c.game.n = s.require<int>("n");
    s.read("rho_a", c.game.rho_a);
    s.read("rho_b", c.game.rho_b);
    s.read("r", c.game.r);
    c.game.g = string_list(s.at("g"), s.where("g"));
    c.game.h = string_list(s.at("h"), s.where("h"));
    if (s.has("l")) {
      const json& l = s.at("l");
      if (!l.is_array()) throw SpecError("game.l: expected a list of per-pursuer lists");
      for (std::size_t i = 0; i < l.size(); ++i) {
        c.game.l.push_back(string_list(l[i], "game.l[" + std::to_string(i) + "]"));
      }
    }
    s.read("shared_g", c.game.shared_g);
    s.finish();
  }

  {
    Section s(root.at("solve"), "solve");
    const json& axes = s.at("axes");
    if (!axes.is_array() || axes.empty()) throw SpecError("solve.axes: expected a non-empty list");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      c.solve.axes.push_back(parse_axis(axes[i], "solve.axes[" + std::to_string(i) + "]"));
    }
    s.read("time_step", c.solve.time_step);
    s.read("control_samples", c.solve.control_samples);
    s.read("tolerance", c.solve.tolerance);
    s.read("max_iterations", c.solve.max_iterations);
    s.read("evader_outer", c.solve.evader_outer);
    s.read("hypothesis_samples", c.solve.hypothesis_samples);
    s.finish();
    if (!(c.solve.tolerance > 0.0)) throw SpecError("solve.tolerance: must be > 0");
    if (c.solve.max_iterations < 1) throw SpecError("solve.max_iterations: must be >= 1");
    if (c.solve.control_samples != 0 && c.solve.control_samples < 2) {
      throw SpecError("solve.control_samples: must be 0 (default) or >= 2");
    }
    if (c.solve.time_step && !(*c.solve.time_step > 0.0)) {
      throw SpecError("solve.time_step: must be > 0");
    }
  }

  if (root.has("decompose")) {
    Section s(root.at("decompose"), "decompose");
    s.read("enabled", c.decompose.enabled);
    s.read("condition_c_samples", c.decompose.condition_c_samples);
    s.read("full_simplex", c.decompose.full_simplex);
    s.finish();
  }

  if (root.has("simulate")) {
    Section s(root.at("simulate"), "simulate");
    if (s.has("starts")) {
      const json& starts = s.at("starts");
      if (!starts.is_array()) throw SpecError("simulate.starts: expected a list of states");
      for (std::size_t i = 0; i < starts.size(); ++i) {
        c.simulate.starts.push_back(
            number_list(starts[i], "simulate.starts[" + std::to_string(i) + "]"));
      }
    }
    s.read("dt", c.simulate.dt);
    s.read("horizon", c.simulate.horizon);
    if (s.has("pursuers")) c.simulate.pursuers = parse_policy(s.at("pursuers"), "simulate.pursuers");
    if (s.has("evader")) c.simulate.evader = parse_policy(s.at("evader"), "simulate.evader");
    s.read("idle_pursuers", c.simulate.idle_pursuers);
    s.finish();
    if (!(c.simulate.dt > 0.0)) throw SpecError("simulate.dt: must be > 0");
    if (c.simulate.horizon && !(*c.simulate.horizon > 0.0)) {
      throw SpecError("simulate.horizon: must be > 0");
    }
  }

  if (root.has("levelsets")) {
    Section s(root.at("levelsets"), "levelsets");
    s.read("axis_x", c.levelsets.axis_x);
    s.read("axis_y", c.levelsets.axis_y);
    if (s.has("anchor")) c.levelsets.anchor = number_list(s.at("anchor"), "levelsets.anchor");
    s.read("resolution", c.levelsets.resolution);
    if (s.has("levels")) c.levelsets.levels = number_list(s.at("levels"), "levelsets.levels");
    s.finish();
    if (c.levelsets.resolution < 2) throw SpecError("levelsets.resolution: must be >= 2");
  }

  if (root.has("output")) {
    Section s(root.at("output"), "output");
    s.read("dir", c.output.dir);
    s.read("value_dumps", c.output.value_dumps);
    s.read("trajectories", c.output.trajectories);
    s.read("levelsets", c.output.levelsets);
    s.finish();
  }
  root.finish();

  const std::size_t dim = c.solve.axes.size();
  for (std::size_t i = 0; i < c.simulate.starts.size(); ++i) {
    if (c.simulate.starts[i].size() != dim) {
      throw SpecError("simulate.starts[" + std::to_string(i) + "]: expected " +
                      std::to_string(dim) + " coordinates");
    }
  }
  if (c.levelsets.anchor.empty()) {
    for (const Axis& a : c.solve.axes) c.levelsets.anchor.push_back(0.5 * (a.lo + a.hi));
  }
  if (c.levelsets.anchor.size() != dim) {
    throw SpecError("levelsets.anchor: expected " + std::to_string(dim) + " coordinates");
  }
  // a one-dimensional state has no slice; the default axes are left unchecked
  const bool slice_checked = root.has("levelsets") || dim >= 2;
  for (int axis : {c.levelsets.axis_x, c.levelsets.axis_y}) {
    if (!slice_checked) break;
    if (axis < 1 || static_cast<std::size_t>(axis) > dim) {
      throw SpecError("levelsets: axis " + std::to_string(axis) + " outside 1.." +
                      std::to_string(dim));
    }
  }
  if (c.levelsets.axis_x == c.levelsets.axis_y) {
    throw SpecError("levelsets: axis_x and axis_y must differ");
  }
  if (c.levelsets.levels.empty()) {
    for (int k = 1; k <= 8; ++k) c.levelsets.levels.push_back(1.0 - std::exp(-0.5 * k));
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw SpecError(path + ": " + e.what());
  }
  return parse_run_config(doc);
}

json to_json(const RunConfig& c) {
  json game = {{"mode", c.game.mode}, {"m", c.game.m},         {"n", c.game.n},
               {"rho_a", c.game.rho_a}, {"rho_b", c.game.rho_b}, {"r", c.game.r},
               {"g", c.game.g},         {"h", c.game.h},         {"l", c.game.l}};
  game["shared_g"] = c.game.shared_g ? json(*c.game.shared_g) : json(nullptr);

  json axes = json::array();
  for (const Axis& a : c.solve.axes) axes.push_back({{"lo", a.lo}, {"hi", a.hi}, {"count", a.count}});
  json solve = {{"axes", axes},
                {"time_step", optional_json(c.solve.time_step)},
                {"control_samples", c.solve.control_samples},
                {"tolerance", c.solve.tolerance},
                {"max_iterations", c.solve.max_iterations},
                {"evader_outer", c.solve.evader_outer},
                {"hypothesis_samples", c.solve.hypothesis_samples}};
  json decompose = {{"enabled", c.decompose.enabled},
                    {"condition_c_samples", c.decompose.condition_c_samples},
                    {"full_simplex", c.decompose.full_simplex}};
  json simulate = {{"starts", c.simulate.starts},
                   {"dt", c.simulate.dt},
                   {"horizon", optional_json(c.simulate.horizon)},
                   {"pursuers", policy_json(c.simulate.pursuers)},
                   {"evader", policy_json(c.simulate.evader)},
                   {"idle_pursuers", c.simulate.idle_pursuers}};
  json levelsets = {{"axis_x", c.levelsets.axis_x},
                    {"axis_y", c.levelsets.axis_y},
                    {"anchor", c.levelsets.anchor},
                    {"resolution", c.levelsets.resolution},
                    {"levels", c.levelsets.levels}};
  json output = {{"dir", c.output.dir},
                 {"value_dumps", c.output.value_dumps},
                 {"trajectories", c.output.trajectories},
                 {"levelsets", c.output.levelsets}};
  return {{"game", game},           {"solve", solve},         {"decompose", decompose},
          {"simulate", simulate},   {"levelsets", levelsets}, {"output", output}};
}

GameSpec build_game(const RunConfig& config) {
  const GameSection& g = config.game;
  GameSpecParams p;
  p.mode = coordinate_mode_from_string(g.mode);
  p.m = g.m;
  p.n = g.n;
  p.rho_a = g.rho_a;
  p.rho_b = g.rho_b;
  p.r = g.r;
  p.shared_g = g.shared_g;
  if (g.m < 1 || g.n < 1) throw SpecError("game.m and game.n must be >= 1");
  const int field_dim = p.mode == CoordinateMode::kRelative ? g.m * g.n : g.n;
  for (const auto& text : g.g) p.g.push_back(parse_field(text, field_dim));
  for (const auto& text : g.h) p.h.push_back(parse_field(text, field_dim));
  for (const auto& li : g.l) {
    std::vector<ScalarFieldExpr> row;
    for (const auto& text : li) row.push_back(parse_field(text, field_dim));
    p.l.push_back(std::move(row));
  }
  GameSpec spec(std::move(p));
  if (static_cast<int>(config.solve.axes.size()) != spec.state_dim()) {
    throw SpecError("solve.axes: expected " + std::to_string(spec.state_dim()) +
                    " axes for the game state, got " + std::to_string(config.solve.axes.size()));
  }
  return spec;
}

SolveParams build_solve_params(const RunConfig& config, unsigned threads) {
  SolveParams p;
  p.time_step = config.solve.time_step;
  p.control_samples = config.solve.control_samples;
  p.tolerance = config.solve.tolerance;
  p.max_iterations = config.solve.max_iterations;
  p.evader_outer = config.solve.evader_outer;
  p.hypothesis_samples = config.solve.hypothesis_samples;
  p.threads = threads;
  return p;
}

Box solve_box(const RunConfig& config) {
  Box b;
  for (const Axis& a : config.solve.axes) {
    b.lo.push_back(a.lo);
    b.hi.push_back(a.hi);
  }
  return b;
}

json to_json(const HypothesisReport& r) {
  json j = {{"pass", r.pass},
            {"min_margin", r.min_margin},
            {"worst_x", r.worst_x},
            {"worst_pursuer", r.worst_pursuer >= 0 ? json(r.worst_pursuer + 1) : json(nullptr)},
            {"samples", r.samples},
            {"sign_violations", r.sign_violations}};
  j["spec_error"] = r.spec_error ? json(*r.spec_error) : json(nullptr);
  return j;
}

json to_json(const SolveReport& r) {
  return {{"converged", r.converged},     {"iterations", r.iterations},
          {"residual", r.residual},       {"time_step", r.time_step},
          {"control_samples", r.control_samples}, {"wall_seconds", r.wall_seconds},
          {"nodes", r.nodes},             {"target_nodes", r.target_nodes},
          {"max_increase", r.max_increase}, {"min_value", r.min_value},
          {"max_value", r.max_value}};
}

json to_json(const ConditionCReport& r) {
  json j = {{"pass", r.pass},
            {"points", r.points},
            {"points_with_ties", r.points_with_ties},
            {"violations", r.violations},
            {"worst_violation", r.worst_violation},
            {"structural_guarantee", r.structural_guarantee},
            {"note", r.note}};
  if (r.witness) {
    std::vector<int> active;
    for (int i : r.witness->active) active.push_back(i + 1);
    j["witness"] = {{"x", r.witness->x},
                    {"active", active},
                    {"weights", r.witness->weights},
                    {"gradients", r.witness->gradients}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

}  // namespace pedecomp
