#include "pedecomp/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pedecomp/errors.hpp"

namespace pedecomp {

TensorGrid::TensorGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw GridError("grid needs at least one axis");
  if (axes_.size() > kMaxGridDims) {
    throw GridError("grid has " + std::to_string(axes_.size()) + " axes, at most " +
                    std::to_string(kMaxGridDims) + " supported");
  }
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    const Axis& a = axes_[k];
    if (a.count < 2) throw GridError("axis " + std::to_string(k) + " needs >= 2 nodes");
    if (!(a.lo < a.hi) || !std::isfinite(a.lo) || !std::isfinite(a.hi)) {
      throw GridError("axis " + std::to_string(k) + " needs finite lo < hi");
    }
  }
  if (node_count(axes_) > 1e12) throw GridError("grid is too large to address");

  spacings_.resize(axes_.size());
  inverse_spacings_.resize(axes_.size());
  strides_.resize(axes_.size());
  std::size_t stride = 1;
  for (std::size_t k = axes_.size(); k-- > 0;) {
    spacings_[k] = axes_[k].spacing();
    inverse_spacings_[k] = 1.0 / spacings_[k];
    strides_[k] = stride;
    stride *= axes_[k].count;
  }
  size_ = stride;
}

double TensorGrid::node_count(const std::vector<Axis>& axes) {
  double total = 1.0;
  for (const auto& a : axes) total *= static_cast<double>(a.count);
  return total;
}

double TensorGrid::min_spacing() const {
  return *std::min_element(spacings_.begin(), spacings_.end());
}

double TensorGrid::max_spacing() const {
  return *std::max_element(spacings_.begin(), spacings_.end());
}

Box TensorGrid::box() const {
  Box b;
  for (const auto& a : axes_) {
    b.lo.push_back(a.lo);
    b.hi.push_back(a.hi);
  }
  return b;
}

std::vector<std::size_t> TensorGrid::multi_index(std::size_t flat) const {
  std::vector<std::size_t> idx(axes_.size());
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    idx[k] = flat / strides_[k];
    flat %= strides_[k];
  }
  return idx;
}

std::size_t TensorGrid::flat_index(std::span<const std::size_t> multi) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < axes_.size(); ++k) flat += multi[k] * strides_[k];
  return flat;
}

std::vector<double> TensorGrid::node_point(std::size_t flat) const {
  std::vector<double> x(axes_.size());
  node_point(flat, x);
  return x;
}

void TensorGrid::node_point(std::size_t flat, std::span<double> out) const {
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    out[k] = axes_[k].coordinate(flat / strides_[k]);
    flat %= strides_[k];
  }
}

namespace {

// Corner weights and offsets are built by doubling over the axes, so the
// scratch buffers hold 2^d entries.
template <std::size_t kCorners>
Interpolated interpolate_impl(const TensorGrid& grid, std::span<const double> values,
                              std::span<const double> x) {
  std::array<double, kCorners> weight;
  std::array<std::size_t, kCorners> index;
  weight[0] = 1.0;
  index[0] = 0;
  std::size_t corners = 1;
  Interpolated out;
  for (std::size_t k = 0; k < grid.dims(); ++k) {
    const Axis& a = grid.axis(k);
    double t = (x[k] - a.lo) * grid.inverse_spacing(k);
    const double last = static_cast<double>(a.count - 1);
    if (!(t >= 0.0)) {
      t = 0.0;
      out.clamped = true;
    } else if (t > last) {
      t = last;
      out.clamped = true;
    }
    const std::size_t i0 = std::min(static_cast<std::size_t>(t), a.count - 2);
    const double w = t - static_cast<double>(i0);
    const std::size_t stride = grid.stride(k);
    const std::size_t base = i0 * stride;
    for (std::size_t c = 0; c < corners; ++c) {
      weight[c + corners] = weight[c] * w;
      index[c + corners] = index[c] + base + stride;
      weight[c] *= 1.0 - w;
      index[c] += base;
    }
    corners <<= 1;
  }
  double sum = 0.0;
  for (std::size_t c = 0; c < corners; ++c) sum += weight[c] * values[index[c]];
  out.value = sum;
  return out;
}

}  // namespace

Interpolated interpolate(const TensorGrid& grid, std::span<const double> values,
                         std::span<const double> x) {
  const std::size_t d = grid.dims();
  if (d <= 2) return interpolate_impl<4>(grid, values, x);
  if (d <= 4) return interpolate_impl<16>(grid, values, x);
  if (d <= 6) return interpolate_impl<64>(grid, values, x);
  return interpolate_impl<std::size_t{1} << kMaxGridDims>(grid, values, x);
}

void interpolation_stencil(const TensorGrid& grid, std::span<const double> x,
                           std::span<std::size_t> index, std::span<double> weight) {
  const std::size_t total = std::size_t{1} << grid.dims();
  if (index.size() < total || weight.size() < total) {
    throw GridError("stencil buffers hold fewer than 2^dims entries");
  }
  weight[0] = 1.0;
  index[0] = 0;
  std::size_t corners = 1;
  for (std::size_t k = 0; k < grid.dims(); ++k) {
    const Axis& a = grid.axis(k);
    double t = (x[k] - a.lo) * grid.inverse_spacing(k);
    const double last = static_cast<double>(a.count - 1);
    if (!(t >= 0.0)) {
      t = 0.0;
    } else if (t > last) {
      t = last;
    }
    const std::size_t i0 = std::min(static_cast<std::size_t>(t), a.count - 2);
    const double w = t - static_cast<double>(i0);
    const std::size_t stride = grid.stride(k);
    const std::size_t base = i0 * stride;
    for (std::size_t c = 0; c < corners; ++c) {
      weight[c + corners] = weight[c] * w;
      index[c + corners] = index[c] + base + stride;
      weight[c] *= 1.0 - w;
      index[c] += base;
    }
    corners <<= 1;
  }
}

ValueField::ValueField(TensorGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw GridError("value count " + std::to_string(values_.size()) +
                    " does not match grid size " + std::to_string(grid_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw GridError("value field entries must be finite and lie in [0, 1]");
    }
  }
}

ValueField ValueField::unchecked(TensorGrid grid, std::vector<double> values) {
  if (values.size() != grid.size()) throw GridError("value count does not match grid size");
  ValueField f;
  f.grid_ = std::move(grid);
  f.values_ = std::move(values);
  return f;
}

std::vector<double> numerical_gradient(const ValueField& field, std::span<const double> x) {
  const TensorGrid& grid = field.grid();
  std::vector<double> grad(grid.dims(), 0.0);
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t k = 0; k < grid.dims(); ++k) {
    const double h = grid.spacing(k);
    const Axis& a = grid.axis(k);
    double lo = x[k] - h;
    double hi = x[k] + h;
    if (lo < a.lo) lo = x[k];
    if (hi > a.hi) hi = x[k];
    if (hi <= lo) continue;
    probe[k] = hi;
    double f_hi = field.interpolate(probe).value;
    probe[k] = lo;
    double f_lo = field.interpolate(probe).value;
    probe[k] = x[k];
    grad[k] = (f_hi - f_lo) / (hi - lo);
  }
  return grad;
}

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_value_dump(std::ostream& out, const ValueField& field) {
  const TensorGrid& grid = field.grid();
  out << "pe-decomp-grid v1; axes=" << grid.dims() << "; counts=";
  for (std::size_t k = 0; k < grid.dims(); ++k) {
    out << (k ? "," : "") << grid.axis(k).count;
  }
  out << "; bounds=";
  for (std::size_t k = 0; k < grid.dims(); ++k) {
    out << (k ? "," : "") << g17(grid.axis(k).lo) << ":" << g17(grid.axis(k).hi);
  }
  out << "\n";
  for (double v : field.values()) out << g17(v) << "\n";
}

void write_value_dump(const std::string& path, const ValueField& field) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_value_dump(out, field);
  if (!out) throw Error("failed writing '" + path + "'");
}

ValueField read_value_dump(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw GridError("empty value dump");
  const std::string magic = "pe-decomp-grid v1; axes=";
  if (header.rfind(magic, 0) != 0) throw GridError("not a pe-decomp-grid v1 dump");

  auto field_after = [&](const std::string& key) {
    auto pos = header.find(key);
    if (pos == std::string::npos) throw GridError("dump header lacks '" + key + "'");
    pos += key.size();
    auto end = header.find(';', pos);
    return header.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
  };
  std::size_t dims = std::stoul(field_after("axes="));
  std::vector<Axis> axes(dims);

  std::stringstream counts(field_after("counts="));
  std::stringstream bounds(field_after("bounds="));
  std::string item;
  for (std::size_t k = 0; k < dims; ++k) {
    if (!std::getline(counts, item, ',')) throw GridError("dump header: missing count");
    axes[k].count = std::stoul(item);
    if (!std::getline(bounds, item, ',')) throw GridError("dump header: missing bounds");
    auto colon = item.find(':');
    if (colon == std::string::npos) throw GridError("dump header: malformed bounds");
    axes[k].lo = std::stod(item.substr(0, colon));
    axes[k].hi = std::stod(item.substr(colon + 1));
  }
  TensorGrid grid(std::move(axes));
  std::vector<double> values;
  values.reserve(grid.size());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    values.push_back(std::stod(line));
  }
  return ValueField(std::move(grid), std::move(values));
}

ValueField read_value_dump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_value_dump(in);
}

}  // namespace pedecomp
