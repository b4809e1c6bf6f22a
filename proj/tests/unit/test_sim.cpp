#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "pedecomp/errors.hpp"
#include "pedecomp/sim.hpp"
#include "support.hpp"

using namespace pedecomp;

namespace {

struct Example1 {
  GameSpec spec = test::example1();
  DecomposedSolution dec;
  Example1()
      : dec(solve_decomposed(spec, SolveParams{},
                             subgrids(decompose(spec), std::vector<Axis>(2, Axis{0, 3, 301})))) {}
};

const Example1& example1() {
  static const Example1 e;
  return e;
}

}  // namespace

TEST_CASE("Kruzhkov transform") {
  for (double t = 0.0; t <= 30.0; t += 0.25) {
    CHECK(std::abs(kruzhkov_inverse(kruzhkov(t)) - t) <= 1e-12 * std::max(1.0, std::exp(t)));
  }
  CHECK(kruzhkov_inverse(1.0 - std::exp(-6.0)) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(kruzhkov(std::numeric_limits<double>::infinity()) == 1.0);
  CHECK(std::isinf(kruzhkov_inverse(1.0)));
  CHECK_THROWS_AS(kruzhkov_inverse(-0.1), DomainError);
  CHECK_THROWS_AS(kruzhkov_inverse(1.5), DomainError);
  CHECK(default_horizon(0.0) == 1.0);
  CHECK(default_horizon(1.0) == 100.0);
  CHECK(default_horizon(kruzhkov(2.0)) == doctest::Approx(6.0));
}

TEST_CASE("capture at the start") {
  GameSpec s = test::example1();
  Policies idle{zero_law(2), zero_law(1)};
  auto tr = simulate(s, idle, std::vector<double>{0.05, 2.0}, 1e-3, 5.0);
  CHECK(tr.outcome == Outcome::kCaptured);
  CHECK(tr.t_hit == 0.0);
  CHECK(tr.captured_by == 0);
  CHECK(tr.states.size() == 1);
}

TEST_CASE("Euler steps are exact for constant controls") {
  GameSpec s = test::example1();
  Policies p{constant_law({0.5, -1.0}), constant_law({0.25})};
  std::vector<double> x0{1.5, 2.0};
  auto tr = simulate(s, p, x0, 0.01, 1.0);
  CHECK(tr.outcome == Outcome::kEscaped);
  REQUIRE(tr.states.size() == 101);
  // y1' = -(2/3)(0.5) + 0.125, y2' = 1 + 0.125
  const double v1 = -1.0 / 3.0 + 0.125;
  const double v2 = 1.125;
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    CHECK(std::abs(tr.states[k][0] - (x0[0] + tr.times[k] * v1)) <= 1e-12);
    CHECK(std::abs(tr.states[k][1] - (x0[1] + tr.times[k] * v2)) <= 1e-12);
  }
  CHECK(tr.controls.size() == 100);
}

TEST_CASE("capture time is bracketed to a fraction of the step") {
  GameSpec s = test::line_game("1", "0");
  Policies p{constant_law({1.0}), zero_law(1)};
  auto tr = simulate(s, p, std::vector<double>{1.0}, 0.1, 5.0);
  CHECK(tr.outcome == Outcome::kCaptured);
  CHECK(tr.t_hit >= 0.9);
  CHECK(tr.t_hit <= 0.9 + 0.1 / 100.0 + 1e-12);
}

TEST_CASE("inadmissible policies are rejected") {
  GameSpec s = test::example1();
  Policies p{constant_law({2.0, 0.0}), zero_law(1)};
  CHECK_THROWS_AS(simulate(s, p, std::vector<double>{1.0, 1.0}, 0.01, 1.0), SpecError);
}

TEST_CASE("optimal play reproduces the race times") {
  const auto& e = example1();
  FeedbackStrategy st(e.spec, e.dec.envelope);
  Policies opt = optimal_policies(st);

  auto a = simulate(e.spec, opt, std::vector<double>{1.1, 1.1}, 1e-3, 10.0);
  CHECK(a.outcome == Outcome::kCaptured);
  CHECK(a.captured_by == 1);
  CHECK(a.t_hit == doctest::Approx(2.0).epsilon(0.05));

  auto b = simulate(e.spec, opt, std::vector<double>{1.0, 0.6}, 1e-3, 10.0);
  CHECK(b.captured_by == 1);
  CHECK(b.t_hit == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("deviating from the optimal feedback does not help the deviator") {
  const auto& e = example1();
  FeedbackStrategy st(e.spec, e.dec.envelope);
  Policies opt = optimal_policies(st);
  for (const auto& x : sample_box(Box{{0.4, 0.4}, {2.0, 2.0}}, 8, 11)) {
    double t = simulate(e.spec, opt, x, 1e-3, 20.0).t_hit;
    Policies idle_evader{opt.pursuers, zero_law(1)};
    CHECK(simulate(e.spec, idle_evader, x, 1e-3, 20.0).t_hit <= t + 1e-2);
    Policies lazy{idle_pursuer(opt.pursuers, 0, 1), opt.evader};
    CHECK(simulate(e.spec, lazy, x, 1e-3, 20.0).t_hit >= t - 1e-2);
  }
}

TEST_CASE("remaining time plus elapsed time stays constant along optimal play") {
  const auto& e = example1();
  FeedbackStrategy st(e.spec, e.dec.envelope);
  auto tr = simulate(e.spec, optimal_policies(st), std::vector<double>{0.9, 1.4}, 1e-3, 20.0);
  REQUIRE(tr.outcome == Outcome::kCaptured);
  const double c0 = kruzhkov_inverse(e.dec.envelope.value(tr.states.front()));
  for (std::size_t k = 0; k + 1 < tr.states.size(); k += 50) {
    double c = kruzhkov_inverse(e.dec.envelope.value(tr.states[k])) + tr.times[k];
    CHECK(std::abs(c - c0) <= 0.1 * c0);
  }
}

TEST_CASE("trajectory CSV layout") {
  GameSpec s = test::example1();
  Policies p{constant_law({0.0, 1.0}), zero_law(1)};
  auto tr = simulate(s, p, std::vector<double>{1.0, 0.3}, 0.1, 1.0);
  std::ostringstream out;
  write_trajectory_csv(out, s, tr);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x1,x2,a1,a2,b1,dmin");
  std::getline(in, line);
  CHECK(line == "0,1,0.3,0,1,0,0.3");
  std::string last;
  while (std::getline(in, line)) last = line;
  CHECK(last.find(",,,") != std::string::npos);
}
