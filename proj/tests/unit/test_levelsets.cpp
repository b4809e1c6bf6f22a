#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "pedecomp/errors.hpp"
#include "pedecomp/levelsets.hpp"

using namespace pedecomp;

namespace {

double radius(std::span<const double> x) { return std::hypot(x[0], x[1]); }

}  // namespace

TEST_CASE("circles come out closed") {
  Slice s{0, 1, Axis{-2, 2, 81}, Axis{-2, 2, 81}, {0.0, 0.0}};
  auto lines = level_sets(radius, s, {0.5, 1.0, 1.5});
  REQUIRE(lines.size() == 3);
  for (const auto& l : lines) {
    CHECK(l.closed);
    CHECK(l.points.size() > 20);
    for (const auto& p : l.points) CHECK(std::hypot(p[0], p[1]) == doctest::Approx(l.level).epsilon(0.01));
  }
}

TEST_CASE("levels crossing the slice edge give open polylines") {
  Slice s{0, 1, Axis{0, 1, 11}, Axis{0, 1, 11}, {0.0, 0.0}};
  auto f = [](std::span<const double> x) { return x[0] + x[1]; };
  auto lines = level_sets(f, s, {0.5, 3.0});
  REQUIRE(lines.size() == 1);
  CHECK_FALSE(lines[0].closed);
  for (const auto& p : lines[0].points) CHECK(p[0] + p[1] == doctest::Approx(0.5));
}

TEST_CASE("slices through higher-dimensional states keep the anchor") {
  Slice s{0, 2, Axis{-1, 1, 21}, Axis{-1, 1, 21}, {0.0, 0.7, 0.0}};
  auto f = [](std::span<const double> x) {
    CHECK(x[1] == 0.7);
    return x[0] - x[2];
  };
  auto lines = level_sets(f, s, {0.0});
  REQUIRE(lines.size() == 1);
  std::ostringstream out;
  write_levelsets_csv(out, s, lines);
  CHECK(out.str().rfind("x1,x3,level\n", 0) == 0);

  Slice bad{1, 1, Axis{-1, 1, 3}, Axis{-1, 1, 3}, {0.0, 0.0}};
  CHECK_THROWS(level_sets(f, bad, {0.0}));
}

TEST_CASE("polylines are separated by blank lines") {
  Slice s{0, 1, Axis{-2, 2, 41}, Axis{-2, 2, 41}, {0.0, 0.0}};
  auto lines = level_sets(radius, s, {0.5, 1.0});
  std::ostringstream out;
  write_levelsets_csv(out, s, lines);
  std::string text = out.str();
  std::size_t blanks = 0;
  for (std::size_t p = text.find("\n\n"); p != std::string::npos; p = text.find("\n\n", p + 1)) {
    ++blanks;
  }
  CHECK(blanks == 1);
}
