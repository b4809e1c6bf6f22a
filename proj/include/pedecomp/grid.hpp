#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pedecomp/box.hpp"

namespace pedecomp {

inline constexpr std::size_t kMaxGridDims = 12;

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 2;

  double spacing() const { return (hi - lo) / static_cast<double>(count - 1); }
  double coordinate(std::size_t i) const {
    return i + 1 == count ? hi : lo + static_cast<double>(i) * spacing();
  }
};

// Tensor-product grid. Nodes are stored lexicographically with the last axis
// varying fastest.
class TensorGrid {
 public:
  TensorGrid() = default;
  explicit TensorGrid(std::vector<Axis> axes);

  std::size_t dims() const { return axes_.size(); }
  const std::vector<Axis>& axes() const { return axes_; }
  const Axis& axis(std::size_t k) const { return axes_[k]; }
  double spacing(std::size_t k) const { return spacings_[k]; }
  double inverse_spacing(std::size_t k) const { return inverse_spacings_[k]; }
  double min_spacing() const;
  double max_spacing() const;
  std::size_t size() const { return size_; }
  std::size_t stride(std::size_t k) const { return strides_[k]; }
  Box box() const;

  std::vector<std::size_t> multi_index(std::size_t flat) const;
  std::size_t flat_index(std::span<const std::size_t> multi) const;
  std::vector<double> node_point(std::size_t flat) const;
  void node_point(std::size_t flat, std::span<double> out) const;

  // Number of nodes a grid with these axes would have, in floating point so
  // oversized requests can be reported without overflow.
  static double node_count(const std::vector<Axis>& axes);

 private:
  std::vector<Axis> axes_;
  std::vector<double> spacings_;
  std::vector<double> inverse_spacings_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

struct Interpolated {
  double value = 0.0;
  bool clamped = false;  // the query was moved onto the box first
};

// Multilinear interpolation of node data. Queries outside the box are clamped
// componentwise; the output itself is never clamped.
Interpolated interpolate(const TensorGrid& grid, std::span<const double> values,
                         std::span<const double> x);

// Corner node indices and weights of the multilinear interpolation at x
// (2^dims entries each, same clamping as interpolate).
void interpolation_stencil(const TensorGrid& grid, std::span<const double> x,
                           std::span<std::size_t> index, std::span<double> weight);

// Tensor grid plus one Kruzhkov-transformed value per node.
class ValueField {
 public:
  ValueField() = default;
  // Requires one finite value per node, each in [0, 1].
  ValueField(TensorGrid grid, std::vector<double> values);
  // Skips the [0, 1] range check; used for arbitrary node data in tests and
  // for gradients of raw samples.
  static ValueField unchecked(TensorGrid grid, std::vector<double> values);

  const TensorGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t dims() const { return grid_.dims(); }

  Interpolated interpolate(std::span<const double> x) const {
    return pedecomp::interpolate(grid_, values_, x);
  }
  double operator()(std::span<const double> x) const { return interpolate(x).value; }

 private:
  TensorGrid grid_;
  std::vector<double> values_;
};

// Central differences with one grid spacing per axis, through interpolation.
// Within one spacing of the box boundary the difference becomes one-sided.
std::vector<double> numerical_gradient(const ValueField& field, std::span<const double> x);

// "pe-decomp-grid v1" dump: header line then one %.17g value per line.
void write_value_dump(std::ostream& out, const ValueField& field);
void write_value_dump(const std::string& path, const ValueField& field);
ValueField read_value_dump(std::istream& in);
ValueField read_value_dump(const std::string& path);

}  // namespace pedecomp
