#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pedecomp/errors.hpp"
#include "pedecomp/fields.hpp"

using namespace pedecomp;

namespace {

constexpr const char* kChannel = "if(abs(x2) < 0.5, 1 - 0.5*cos(pi*x1), 1)";

double at(const char* src, std::vector<double> x) {
  return parse_field(src, static_cast<int>(x.size())).eval(x);
}

}  // namespace

TEST_CASE("arithmetic precedence and associativity") {
  CHECK(at("2*3+1", {}) == 7.0);
  CHECK(at("1+2*3", {}) == 7.0);
  CHECK(at("10-4-3", {}) == 3.0);
  CHECK(at("24/4/3", {}) == 2.0);
  CHECK(at("2^3^2", {}) == 512.0);
  CHECK(at("-2^2", {}) == -4.0);
  CHECK(at("(1+2)*3", {}) == 9.0);
  CHECK(at("2^-1", {}) == 0.5);
  CHECK(at("1e-3*1000", {}) == doctest::Approx(1.0));
}

TEST_CASE("functions, constants and conditionals") {
  CHECK(at("cos(pi)", {}) == doctest::Approx(-1.0));
  CHECK(at("sin(0)+exp(0)+abs(-2)+sqrt(9)", {}) == doctest::Approx(6.0));
  CHECK(at("min(3, 2) + max(3, 2)", {}) == 5.0);
  CHECK(at("if(1 <= 1, 4, 5)", {}) == 4.0);
  CHECK(at("if(1 > 1, 4, 5)", {}) == 5.0);
  CHECK(at("if(2 >= 1, x1, 0)", {7.0}) == 7.0);
}

TEST_CASE("channel speed field") {
  CHECK(at(kChannel, {0.0, 0.0}) == doctest::Approx(0.5));
  CHECK(at(kChannel, {1.0, 0.0}) == doctest::Approx(1.5));
  CHECK(at(kChannel, {0.0, 0.7}) == 1.0);
  // exact switch at the channel edge
  CHECK(at(kChannel, {0.0, 0.5}) == 1.0);
  CHECK(at(kChannel, {0.0, 0.4999999}) == doctest::Approx(0.5));
}

TEST_CASE("constant fields") {
  auto f = parse_field("0.9", 3);
  CHECK(f.is_constant());
  CHECK(f.eval(std::vector<double>{1, 2, 3}) == 0.9);
  CHECK(eval_field(parse_field("1", 2), std::vector<double>{-5, 5}) == 1.0);
  CHECK(ScalarFieldExpr::constant(2.5, 1).eval(std::vector<double>{0.0}) == 2.5);
}

TEST_CASE("variables are reported 0-based") {
  auto f = parse_field("x1 + x3*x3", 4);
  CHECK(f.variables() == std::set<int>{0, 2});
  CHECK_FALSE(f.is_constant());
}

TEST_CASE("parse errors carry byte offsets") {
  try {
    parse_field("1 + * 2", 1);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse_field("x3", 2), ParseError);
  CHECK_THROWS_AS(parse_field("x0", 2), ParseError);
  CHECK_THROWS_AS(parse_field("foo(1)", 1), ParseError);
  CHECK_THROWS_AS(parse_field("cos(1, 2)", 1), ParseError);
  CHECK_THROWS_AS(parse_field("min(1)", 1), ParseError);
  CHECK_THROWS_AS(parse_field("if(1, 2, 3)", 1), ParseError);
  CHECK_THROWS_AS(parse_field("", 1), ParseError);
  CHECK_THROWS_AS(parse_field("(1 + 2", 1), ParseError);
  CHECK_THROWS_AS(parse_field("1 2", 1), ParseError);
}

TEST_CASE("domain errors name the subexpression") {
  CHECK_THROWS_AS(at("1/(x1-1)", {1.0}), DomainError);
  CHECK_THROWS_AS(at("sqrt(x1)", {-1.0}), DomainError);
  CHECK_THROWS_AS(at("2^0.5", {}), DomainError);
  CHECK_THROWS_AS(at("exp(1000)", {}), DomainError);
  try {
    at("1 + sqrt(x1)", {-4.0});
  } catch (const DomainError& e) {
    CHECK(e.subexpression().find("sqrt") != std::string::npos);
  }
  auto f = parse_field("x1", 2);
  CHECK_THROWS_AS(f.eval(std::vector<double>{1.0}), DomainError);
}

TEST_CASE("print then parse is evaluation-equivalent") {
  const char* sources[] = {kChannel,
                           "-x1^2 + 3*x2 - x1/(2 + x2*x2)",
                           "max(sin(x1), cos(x2)) * exp(-abs(x1 - x2))",
                           "2^3^2 - -x1 + if(x1 >= x2, sqrt(x1*x1 + 1), min(x1, -x2))",
                           "1 - 2 - 3 + 4/5/6"};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const char* src : sources) {
    CAPTURE(src);
    auto a = parse_field(src, 2);
    auto b = parse_field(a.to_string(), 2);
    CHECK(b.to_string() == a.to_string());
    for (int k = 0; k < 100; ++k) {
      std::vector<double> x{u(rng), u(rng)};
      CHECK(std::abs(a.eval(x) - b.eval(x)) <= 1e-12);
    }
  }
}

TEST_CASE("evaluation is bitwise repeatable") {
  auto f = parse_field("sin(x1)*exp(x2) + x1^3", 2);
  std::vector<double> x{0.3, -0.7};
  double first = f.eval(x);
  for (int k = 0; k < 10; ++k) CHECK(f.eval(x) == first);
}

TEST_CASE("remap moves variables between dimensions") {
  auto f = parse_field("x3 + 2*x4", 4);
  auto g = f.remap({{2, 0}, {3, 1}}, 2);
  CHECK(g.dimension() == 2);
  CHECK(g.eval(std::vector<double>{1.0, 2.0}) == 5.0);
  CHECK_THROWS(f.remap({{2, 0}}, 2));
}
