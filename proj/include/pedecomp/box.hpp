#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pedecomp {

// Axis-aligned box in R^d.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dims() const { return lo.size(); }
  bool contains(std::span<const double> x, double slack = 0.0) const;
  std::vector<double> center() const;
};

// Radical-inverse Halton point with the first `dims` primes as bases.
// index 0 maps to the origin, so callers usually start from 1.
std::vector<double> halton_point(std::uint64_t index, std::size_t dims);

// Deterministic low-discrepancy sample of a box. The first point is the box
// center; the remaining points are Halton points starting at 1 + seed.
std::vector<std::vector<double>> sample_box(const Box& box, std::size_t count,
                                            std::uint64_t seed = 0);

}  // namespace pedecomp
