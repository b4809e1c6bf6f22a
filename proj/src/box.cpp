#include "pedecomp/box.hpp"

#include <stdexcept>

namespace pedecomp {

namespace {

constexpr unsigned kPrimes[] = {2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,
                                37,  41,  43,  47,  53,  59,  61,  67,  71,  73,  79,
                                83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137,
                                139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193};

double radical_inverse(std::uint64_t index, unsigned base) {
  double inv_base = 1.0 / base;
  double scale = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv_base;
  }
  return result;
}

}  // namespace

bool Box::contains(std::span<const double> x, double slack) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < lo[k] - slack || x[k] > hi[k] + slack) return false;
  }
  return true;
}

std::vector<double> Box::center() const {
  std::vector<double> c(lo.size());
  for (std::size_t k = 0; k < lo.size(); ++k) c[k] = 0.5 * (lo[k] + hi[k]);
  return c;
}

std::vector<double> halton_point(std::uint64_t index, std::size_t dims) {
  if (dims > std::size(kPrimes)) {
    throw std::invalid_argument("halton_point: too many dimensions");
  }
  std::vector<double> p(dims);
  for (std::size_t k = 0; k < dims; ++k) p[k] = radical_inverse(index, kPrimes[k]);
  return p;
}

std::vector<std::vector<double>> sample_box(const Box& box, std::size_t count,
                                            std::uint64_t seed) {
  std::vector<std::vector<double>> points;
  if (count == 0) return points;
  points.reserve(count);
  points.push_back(box.center());
  for (std::size_t s = 1; s < count; ++s) {
    auto unit = halton_point(seed + s, box.dims());
    for (std::size_t k = 0; k < unit.size(); ++k) {
      unit[k] = box.lo[k] + unit[k] * (box.hi[k] - box.lo[k]);
    }
    points.push_back(std::move(unit));
  }
  return points;
}

}  // namespace pedecomp
