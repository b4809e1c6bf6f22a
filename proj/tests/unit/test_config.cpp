#include <doctest.h>

#include <cmath>
#include <string>

#include "pedecomp/config.hpp"
#include "pedecomp/errors.hpp"

using namespace pedecomp;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "game": {"m": 2, "n": 1, "r": 0.1, "g": ["2/3", "1"], "h": "1/2"},
    "solve": {"axes": [{"lo": 0, "hi": 3, "count": 31}, {"lo": 0, "hi": 3, "count": 31}]}
  })");
}

std::string error_of(const json& doc) {
  try {
    parse_run_config(doc);
  } catch (const SpecError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults are filled in") {
  RunConfig c = parse_run_config(minimal());
  CHECK(c.game.mode == "relative");
  CHECK(c.game.h == std::vector<std::string>{"1/2"});
  CHECK(c.solve.tolerance == 1e-6);
  CHECK(c.decompose.enabled);
  CHECK(c.simulate.dt == 1e-3);
  CHECK(std::get<std::string>(c.simulate.pursuers) == "optimal");
  CHECK(c.levelsets.anchor == std::vector<double>{1.5, 1.5});
  REQUIRE(c.levelsets.levels.size() == 8);
  CHECK(c.levelsets.levels[1] == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(c.output.dir == "out");

  json resolved = to_json(c);
  CHECK(resolved["solve"]["max_iterations"] == 100000);
  CHECK(parse_run_config(resolved).levelsets.levels == c.levelsets.levels);
}

TEST_CASE("the game and solver settings are built from the document") {
  RunConfig c = parse_run_config(minimal());
  GameSpec s = build_game(c);
  CHECK(s.m() == 2);
  CHECK(s.state_dim() == 2);
  std::vector<double> x{1.0, 1.0};
  CHECK(s.coefficients(x, 1).h == 0.5);
  SolveParams p = build_solve_params(c, 4);
  CHECK(p.threads == 4);
  Box b = solve_box(c);
  CHECK(b.hi == std::vector<double>{3.0, 3.0});
}

TEST_CASE("strict parsing names the offending entry") {
  json unknown = minimal();
  unknown["game"]["speed"] = 2;
  CHECK(error_of(unknown).find("game.speed") != std::string::npos);

  json top = minimal();
  top["extra"] = json::object();
  CHECK(error_of(top).find("extra") != std::string::npos);

  json missing = minimal();
  missing["game"].erase("m");
  CHECK(error_of(missing).find("game.m") != std::string::npos);

  json axis = minimal();
  axis["solve"]["axes"][1]["count"] = 1;
  CHECK(error_of(axis).find("solve.axes[1]") != std::string::npos);

  json start = minimal();
  start["simulate"] = {{"starts", {{1.0}}}};
  CHECK(error_of(start).find("simulate.starts[0]") != std::string::npos);

  json policy = minimal();
  policy["simulate"] = {{"evader", "random"}};
  CHECK_FALSE(error_of(policy).empty());
}

TEST_CASE("axes must match the state dimension") {
  json doc = minimal();
  doc["solve"]["axes"].erase(1);
  CHECK_THROWS_AS(build_game(parse_run_config(doc)), SpecError);
}

TEST_CASE("missing configuration files") {
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), IoError);
}
