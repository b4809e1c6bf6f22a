#include <doctest.h>

#include <vector>

#include "pedecomp/errors.hpp"
#include "pedecomp/model.hpp"
#include "support.hpp"

using namespace pedecomp;

TEST_CASE("example game dimensions and coefficients") {
  GameSpec s = test::example1();
  CHECK(s.state_dim() == 2);
  CHECK(s.block_count() == 2);
  std::vector<double> x{1.0, 2.0};
  CHECK(s.coefficients(x, 0).g == doctest::Approx(2.0 / 3.0));
  CHECK(s.coefficients(x, 1).h == 0.5);

  GameSpec t = test::channel_game(3);
  CHECK(t.state_dim() == 8);
  CHECK(t.block_count() == 4);
  CHECK(t.field_dim() == 2);
  std::vector<double> y{0, 0, 1, 0, 0, 0.7, 5, 5};
  CHECK(t.coefficients(y, 0).g == doctest::Approx(0.5));
  CHECK(t.coefficients(y, 1).g == doctest::Approx(1.5));
  CHECK(t.coefficients(y, 2).g == 1.0);
  CHECK(t.coefficients(y, 2).h == doctest::Approx(0.4));
}

TEST_CASE("construction rejects inconsistent games") {
  auto base = [] {
    GameSpecParams p;
    p.m = 2;
    p.n = 1;
    p.r = 0.1;
    p.g = {parse_field("1", 2)};
    p.h = {parse_field("0.5", 2)};
    return p;
  };
  CHECK_NOTHROW(GameSpec{base()});
  auto p = base();
  p.m = 0;
  CHECK_THROWS_AS(GameSpec{p}, SpecError);
  p = base();
  p.rho_a = 0.0;
  CHECK_THROWS_AS(GameSpec{p}, SpecError);
  p = base();
  p.r = -1.0;
  CHECK_THROWS_AS(GameSpec{p}, SpecError);
  p = base();
  p.g = {parse_field("1", 3)};
  CHECK_THROWS_AS(GameSpec{p}, SpecError);
  p = base();
  p.g = {parse_field("1", 2), parse_field("1", 2), parse_field("1", 2)};
  CHECK_THROWS_AS(GameSpec{p}, SpecError);

  GameSpecParams a;
  a.mode = CoordinateMode::kAbsolute;
  a.m = 2;
  a.n = 1;
  a.r = 0.1;
  a.g = {parse_field("1", 1), parse_field("2", 1)};
  a.h = {parse_field("0.5", 1)};
  CHECK_THROWS_AS(GameSpec{a}, SpecError);  // absolute mode needs a shared g
  a.g = {parse_field("1", 1)};
  a.l = {{parse_field("0.1", 1)}, {parse_field("0", 1)}};
  CHECK_THROWS_AS(GameSpec{a}, SpecError);  // no drift in absolute mode
}

TEST_CASE("dynamics right-hand side") {
  GameSpec s = test::example1();
  ControlPair u{{1.0, 1.0}, {1.0}};
  auto v = dynamics_rhs(s, std::vector<double>{2.0, 2.0}, u);
  CHECK(v[0] == doctest::Approx(-1.0 / 6.0));
  CHECK(v[1] == doctest::Approx(-0.5));

  auto z = dynamics_rhs(s, std::vector<double>{2.0, 2.0}, ControlPair{{0.0, 0.0}, {0.0}});
  CHECK(z == std::vector<double>{0.0, 0.0});

  GameSpec t = test::channel_game(1);
  auto w = dynamics_rhs(t, std::vector<double>{1.0, 1.0, 0.0, 0.0},
                        ControlPair{{0.0, 0.0}, {1.0, 0.0}});
  CHECK(w[2] == doctest::Approx(0.4));
  CHECK(w[3] == 0.0);

  CHECK_THROWS_AS(dynamics_rhs(s, std::vector<double>{1.0}, u), SpecError);
  CHECK_THROWS_AS(dynamics_rhs(s, std::vector<double>{1.0, 1.0}, ControlPair{{1.0}, {1.0}}),
                  SpecError);
}

TEST_CASE("dynamics are affine in the controls") {
  GameSpec s = test::example1();
  std::vector<double> x{0.7, 1.3};
  ControlPair u1{{0.3, -0.2}, {0.4}};
  ControlPair u2{{0.5, 0.6}, {-0.1}};
  ControlPair sum{{0.8, 0.4}, {0.3}};
  auto a = dynamics_rhs(s, x, u1);
  auto b = dynamics_rhs(s, x, u2);
  auto c = dynamics_rhs(s, x, ControlPair{{0, 0}, {0}});
  auto d = dynamics_rhs(s, x, sum);
  for (int k = 0; k < 2; ++k) CHECK(a[k] + b[k] - c[k] == doctest::Approx(d[k]));
}

TEST_CASE("control admissibility") {
  GameSpec s = test::example1();
  CHECK(controls_admissible(s, ControlPair{{1.0, -1.0}, {1.0}}));
  CHECK_FALSE(controls_admissible(s, ControlPair{{1.0 + 1e-9, 0.0}, {0.0}}));
  CHECK_FALSE(controls_admissible(s, ControlPair{{0.0, 0.0}, {1.1}}));
}

TEST_CASE("capture distances and targets") {
  GameSpec s = test::example1();
  std::vector<double> x{0.5, 0.05};
  CHECK(s.min_capture_distance(x).first == doctest::Approx(0.05));
  CHECK(s.min_capture_distance(x).second == 1);
  CHECK(s.in_target(x, TargetSpec::full()));
  CHECK(s.in_target(x, TargetSpec::sub(1)));
  CHECK_FALSE(s.in_target(x, TargetSpec::sub(0)));

  GameSpec t = test::channel_game(1);
  std::vector<double> y{0.0, 0.0, 0.3, 0.4};
  CHECK(t.capture_distance(y, 0) == doctest::Approx(0.5));
}

TEST_CASE("hypothesis (H) margins") {
  Box unit{{0.0, 0.0}, {3.0, 3.0}};
  HypothesisReport ok = check_hypothesis_H(test::example1(), unit, 500);
  CHECK(ok.pass);
  CHECK(ok.min_margin == doctest::Approx(1.0 / 6.0));
  CHECK(ok.worst_pursuer == 0);

  HypothesisReport bad = check_hypothesis_H(test::failing_game(), Box{{0.0}, {3.0}}, 100);
  CHECK_FALSE(bad.pass);
  CHECK(bad.min_margin == doctest::Approx(-0.5).epsilon(1e-12));

  Box b4{{-1.5, -1.5, -1.5, -1.5}, {1.5, 1.5, 1.5, 1.5}};
  HypothesisReport ch = check_hypothesis_H(test::channel_game(1), b4, 10000);
  CHECK(ch.pass);
  // centre sample lands on the slowest point of the channel
  CHECK(ch.min_margin == doctest::Approx(0.1));
}

TEST_CASE("hypothesis margin grows with the pursuer radius") {
  Box box{{0.0, 0.0}, {3.0, 3.0}};
  double previous = -1e300;
  for (double rho : {0.5, 1.0, 1.5, 2.0}) {
    GameSpecParams p;
    p.m = 2;
    p.n = 1;
    p.rho_a = rho;
    p.r = 0.1;
    p.g = {parse_field("1 + 0.2*sin(x1)", 2), parse_field("1", 2)};
    p.h = {parse_field("0.5", 2), parse_field("0.5", 2)};
    double margin = check_hypothesis_H(GameSpec(p), box, 300).min_margin;
    CHECK(margin >= previous);
    previous = margin;
  }
}

TEST_CASE("sign violations and field errors are reported") {
  GameSpecParams p;
  p.m = 1;
  p.n = 1;
  p.r = 0.1;
  p.g = {parse_field("x1 - 1", 1)};
  p.h = {parse_field("-0.5", 1)};
  HypothesisReport r = check_hypothesis_H(GameSpec(p), Box{{0.0}, {3.0}}, 50);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.sign_violations.empty());

  p.g = {parse_field("1/(x1 - 1.5)", 1)};
  p.h = {parse_field("0", 1)};
  HypothesisReport e = check_hypothesis_H(GameSpec(p), Box{{0.0}, {3.0}}, 50);
  CHECK_FALSE(e.pass);
  CHECK(e.spec_error.has_value());
}
