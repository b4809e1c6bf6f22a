#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "pedecomp/grid.hpp"

namespace pedecomp {

// A 2D slice through a full state: coordinates axis_x and axis_y vary over
// the given axes, every other coordinate is taken from `anchor`.
struct Slice {
  int axis_x = 0;
  int axis_y = 1;
  Axis x;
  Axis y;
  std::vector<double> anchor;
};

struct Polyline {
  double level = 0.0;
  bool closed = false;
  std::vector<std::array<double, 2>> points;
};

// Marching squares on the slice samples; saddle cells are split by the
// cell-centre average. Segments are joined into polylines through shared
// edge crossings.
std::vector<Polyline> level_sets(const std::function<double(std::span<const double>)>& f,
                                 const Slice& slice, const std::vector<double>& levels);

// "x1,x2,level" rows, one blank line between polylines. Column names follow
// the slice axes (x<axis_x + 1>, x<axis_y + 1>).
void write_levelsets_csv(std::ostream& out, const Slice& slice,
                         const std::vector<Polyline>& lines);

}  // namespace pedecomp
