#include <doctest.h>

#include <cmath>
#include <vector>

#include "pedecomp/strategy.hpp"
#include "support.hpp"

using namespace pedecomp;

namespace {

ValueField race_field(double k, double r = 0.1, double scale = 1.0) {
  TensorGrid g({Axis{0.0, 3.0, 3001}});
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    v[i] = scale * (1.0 - std::exp(-k * std::max(0.0, g.axis(0).coordinate(i) - r)));
  }
  return ValueField(g, v);
}

EnvelopeValue race_envelope(double scale = 1.0) {
  return envelope({{race_field(6.0, 0.1, scale), {0}}, {race_field(2.0, 0.1, scale), {1}}}, 2,
                  1e-6);
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("feedback signs on the two-pursuer line game") {
  GameSpec s = test::example1();
  EnvelopeValue env = race_envelope();
  FeedbackStrategy st(s, env);

  std::vector<double> x{1.1, 1.1};
  CHECK(st.selected_index(x) == 1);
  auto a = st.pursuer_controls(x);
  // pursuer 2 chases along its gradient, pursuer 1 falls back to closing in
  CHECK(a == std::vector<double>{1.0, 1.0});
  CHECK(st.evader_control(x) == std::vector<double>{1.0});

  std::vector<double> tie{0.4, 1.0};
  FeedbackOptions o;
  o.tie_tolerance = 1e-6;
  FeedbackStrategy banded(s, env, o);
  CHECK(banded.selected_index(tie) == 0);
  CHECK(evader_feedback(st, tie) == std::vector<double>{1.0});
  CHECK(pursuer_feedback(st, tie)[0] == 1.0);
}

TEST_CASE("vanishing gradients") {
  GameSpec s = test::example1();
  TensorGrid g({Axis{0, 3, 31}});
  ValueField flat(g, std::vector<double>(g.size(), 1.0));
  EnvelopeValue env = envelope({{flat, {0}}, {flat, {1}}}, 2);
  FeedbackStrategy st(s, env);
  std::vector<double> x{0.5, -0.0};
  CHECK(st.evader_control(x) == std::vector<double>{0.0});
  auto a = st.pursuer_controls(x);
  CHECK(a[0] == 1.0);
  CHECK(a[1] == 0.0);  // x_2 = 0 gives no direction

  GameSpec t = test::channel_game(1);
  TensorGrid g4(std::vector<Axis>(4, Axis{-1, 1, 3}));
  ValueField flat4(g4, std::vector<double>(g4.size(), 1.0));
  EnvelopeValue env4 = envelope({{flat4, {0, 1, 2, 3}}}, 4);
  FeedbackStrategy st4(t, env4);
  auto a4 = st4.pursuer_controls(std::vector<double>{0.3, 0.0, 0.0, 0.4});
  // velocity is -g a, so a along x_p - x_e closes the gap
  CHECK(a4[0] == doctest::Approx(0.6));
  CHECK(a4[1] == doctest::Approx(-0.8));
}

TEST_CASE("controls sit on the ball boundary or vanish") {
  GameSpecParams p;
  p.m = 2;
  p.n = 1;
  p.rho_a = 1.5;
  p.rho_b = 0.7;
  p.r = 0.1;
  p.g = {parse_field("2/3", 2), parse_field("1", 2)};
  p.h = {parse_field("1/2", 2), parse_field("1/2", 2)};
  GameSpec s(std::move(p));
  EnvelopeValue env = race_envelope();
  FeedbackStrategy st(s, env);
  for (const auto& x : sample_box(Box{{0.2, 0.2}, {2.8, 2.8}}, 200, 3)) {
    auto u = st.controls(x);
    for (double a : u.a) CHECK(std::abs(a) == doctest::Approx(1.5));
    double b = norm(u.b);
    CHECK((b == doctest::Approx(0.7) || b == 0.0));
    CHECK(controls_admissible(s, u));
  }
}

TEST_CASE("feedback ignores positive rescaling of the value") {
  GameSpec s = test::example1();
  EnvelopeValue a = race_envelope(1.0);
  EnvelopeValue b = race_envelope(0.25);
  FeedbackStrategy sa(s, a);
  FeedbackStrategy sb(s, b);
  for (const auto& x : sample_box(Box{{0.2, 0.2}, {2.8, 2.8}}, 100, 5)) {
    auto ua = sa.controls(x);
    auto ub = sb.controls(x);
    CHECK(ua.a == ub.a);
    CHECK(ua.b == ub.b);
  }
}
