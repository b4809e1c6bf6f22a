#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "pedecomp/errors.hpp"
#include "pedecomp/grid.hpp"

using namespace pedecomp;

namespace {

ValueField sample(const TensorGrid& grid, double (*f)(std::span<const double>)) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.node_point(i));
  return ValueField::unchecked(grid, std::move(v));
}

double affine(std::span<const double> x) { return 3.0 * x[0] - 2.0 * x[1]; }

}  // namespace

TEST_CASE("axis geometry") {
  Axis a{0.0, 3.0, 301};
  CHECK(a.spacing() == doctest::Approx(0.01));
  CHECK(a.coordinate(0) == 0.0);
  CHECK(a.coordinate(300) == 3.0);
  TensorGrid g({Axis{0, 1, 3}, Axis{0, 2, 5}});
  CHECK(g.size() == 15);
  CHECK(g.stride(0) == 5);
  CHECK(g.stride(1) == 1);
  CHECK(g.min_spacing() == 0.5);
  CHECK(g.max_spacing() == 0.5);
  CHECK(TensorGrid::node_count({Axis{0, 1, 501}, Axis{0, 1, 501}, Axis{0, 1, 501}}) ==
        501.0 * 501.0 * 501.0);
  CHECK_THROWS_AS(TensorGrid({Axis{0, 1, 1}}), GridError);
  CHECK_THROWS_AS(TensorGrid({Axis{1, 1, 3}}), GridError);
}

TEST_CASE("flat and multi indices round-trip") {
  TensorGrid g({Axis{0, 1, 3}, Axis{0, 1, 4}, Axis{0, 1, 2}});
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.flat_index(g.multi_index(i)) == i);
  auto mi = g.multi_index(1);
  CHECK(mi == std::vector<std::size_t>{0, 0, 1});  // last axis fastest
}

TEST_CASE("interpolation is exact at nodes and for affine data") {
  TensorGrid g1({Axis{0, 1, 11}});
  std::vector<double> ramp(11);
  for (int i = 0; i < 11; ++i) ramp[i] = i / 10.0;
  ValueField f1 = ValueField::unchecked(g1, ramp);
  CHECK(f1(std::vector<double>{0.35}) == doctest::Approx(0.35));
  CHECK(f1(std::vector<double>{0.7}) == doctest::Approx(0.7));

  TensorGrid g2({Axis{0, 1, 11}, Axis{0, 1, 11}});
  ValueField f2 = sample(g2, affine);
  CHECK(f2(std::vector<double>{0.25, 0.55}) == doctest::Approx(-0.35).epsilon(1e-12));
  for (std::size_t i = 0; i < g2.size(); i += 7) {
    CHECK(f2(g2.node_point(i)) == doctest::Approx(f2.values()[i]));
  }
}

TEST_CASE("out-of-box queries are clamped and flagged") {
  TensorGrid g({Axis{0, 1, 11}, Axis{0, 1, 11}});
  ValueField f = sample(g, affine);
  Interpolated in = f.interpolate(std::vector<double>{0.5, 0.5});
  CHECK_FALSE(in.clamped);
  Interpolated out = f.interpolate(std::vector<double>{1.5, -0.5});
  CHECK(out.clamped);
  CHECK(out.value == doctest::Approx(3.0));
}

TEST_CASE("interpolation is monotone in node data") {
  TensorGrid g({Axis{0, 1, 5}, Axis{0, 1, 5}, Axis{0, 1, 5}});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(g.size());
  for (double& x : v) x = u(rng);
  ValueField base = ValueField::unchecked(g, v);
  v[62] += 0.5;
  ValueField raised = ValueField::unchecked(g, v);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> x{u(rng), u(rng), u(rng)};
    CHECK(raised(x) >= base(x));
  }
}

TEST_CASE("value fields enforce the Kruzhkov range") {
  TensorGrid g({Axis{0, 1, 2}});
  CHECK_THROWS(ValueField(g, {0.0, 1.5}));
  CHECK_THROWS(ValueField(g, {0.0}));
  CHECK_NOTHROW(ValueField(g, {0.0, 1.0}));
}

TEST_CASE("numerical gradients") {
  TensorGrid g({Axis{0, 1, 11}, Axis{0, 1, 11}});
  ValueField f = sample(g, affine);
  for (std::vector<double> x : {std::vector<double>{0.5, 0.5}, {0.02, 0.97}, {1.0, 0.0}}) {
    auto d = numerical_gradient(f, x);
    CHECK(d[0] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(d[1] == doctest::Approx(-2.0).epsilon(1e-9));
  }
  ValueField c = ValueField::unchecked(g, std::vector<double>(g.size(), 0.4));
  auto z = numerical_gradient(c, std::vector<double>{0.3, 0.3});
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);

  TensorGrid line({Axis{0, 3, 301}});
  std::vector<double> u(line.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    double x = line.axis(0).coordinate(i);
    u[i] = x <= 0.1 ? 0.0 : 1.0 - std::exp(-6.0 * (x - 0.1));
  }
  ValueField uf(line, u);
  double d = numerical_gradient(uf, std::vector<double>{0.6})[0];
  CHECK(d == doctest::Approx(6.0 * std::exp(-3.0)).epsilon(1e-3));
}

TEST_CASE("gradient agrees with directional differences of the interpolant") {
  TensorGrid g({Axis{0, 1, 21}, Axis{0, 1, 21}});
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto x = g.node_point(i);
    v[i] = std::sin(2 * x[0]) * std::cos(x[1]);
  }
  ValueField f = ValueField::unchecked(g, v);
  std::vector<double> x{0.4125, 0.6375};  // cell centre
  auto d = numerical_gradient(f, x);
  const double h = 1e-6;
  std::vector<double> xp{x[0] + h, x[1]};
  std::vector<double> xm{x[0] - h, x[1]};
  double fd = (f(xp) - f(xm)) / (2 * h);
  CHECK(std::abs(fd - d[0]) <= 2 * g.spacing(0));
}

TEST_CASE("value dumps round-trip bit-exactly") {
  TensorGrid g({Axis{-1.5, 1.5, 4}, Axis{0, 1, 3}});
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (3.0 + static_cast<double>(i));
  ValueField f(g, v);
  std::stringstream ss;
  write_value_dump(ss, f);
  std::string header;
  std::getline(std::stringstream(ss.str()), header);
  CHECK(header == "pe-decomp-grid v1; axes=2; counts=4,3; bounds=-1.5:1.5,0:1");
  ValueField back = read_value_dump(ss);
  CHECK(back.values() == f.values());
  CHECK(back.grid().axis(0).lo == -1.5);

  std::stringstream bad("pe-decomp-grid v1; axes=1; counts=3; bounds=0:1\n0\n0.5\n");
  CHECK_THROWS(read_value_dump(bad));
  std::stringstream junk("hello\n");
  CHECK_THROWS_AS(read_value_dump(junk), GridError);
}
