#include "pedecomp/levelsets.hpp"

#include <cstdio>
#include <map>
#include <optional>
#include <ostream>

#include "pedecomp/errors.hpp"

namespace pedecomp {

namespace {

// Edge key: horizontal edges (i,j)-(i+1,j) get dir 0, vertical (i,j)-(i,j+1) dir 1.
using EdgeKey = std::array<std::size_t, 3>;

}  // namespace

std::vector<Polyline> level_sets(const std::function<double(std::span<const double>)>& f,
                                 const Slice& slice, const std::vector<double>& levels) {
  const auto dim = slice.anchor.size();
  if (slice.axis_x < 0 || slice.axis_y < 0 || slice.axis_x == slice.axis_y ||
      static_cast<std::size_t>(slice.axis_x) >= dim ||
      static_cast<std::size_t>(slice.axis_y) >= dim) {
    throw Error("slice axes must be two distinct coordinates of the anchor state");
  }
  if (slice.x.count < 2 || slice.y.count < 2) throw GridError("slice axes need >= 2 nodes");

  const std::size_t nx = slice.x.count;
  const std::size_t ny = slice.y.count;
  std::vector<double> v(nx * ny);
  std::vector<double> point = slice.anchor;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      point[slice.axis_x] = slice.x.coordinate(i);
      point[slice.axis_y] = slice.y.coordinate(j);
      v[i * ny + j] = f(point);
    }
  }
  auto at = [&](std::size_t i, std::size_t j) { return v[i * ny + j]; };

  std::vector<Polyline> out;
  for (double level : levels) {
    std::map<EdgeKey, std::array<double, 2>> crossing;
    auto cross = [&](const EdgeKey& e) -> EdgeKey {
      if (!crossing.count(e)) {
        std::size_t i = e[0];
        std::size_t j = e[1];
        std::size_t i2 = e[2] == 0 ? i + 1 : i;
        std::size_t j2 = e[2] == 0 ? j : j + 1;
        double a = at(i, j);
        double b = at(i2, j2);
        double t = a == b ? 0.5 : (level - a) / (b - a);
        double x0 = slice.x.coordinate(i);
        double y0 = slice.y.coordinate(j);
        double x1 = slice.x.coordinate(i2);
        double y1 = slice.y.coordinate(j2);
        crossing[e] = {x0 + t * (x1 - x0), y0 + t * (y1 - y0)};
      }
      return e;
    };
    std::multimap<EdgeKey, EdgeKey> links;
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      for (std::size_t j = 0; j + 1 < ny; ++j) {
        // corners counterclockwise: (i,j) (i+1,j) (i+1,j+1) (i,j+1)
        const double c[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
        const EdgeKey edges[4] = {{i, j, 0}, {i + 1, j, 1}, {i, j + 1, 0}, {i, j, 1}};
        int code = 0;
        for (int k = 0; k < 4; ++k) code |= (c[k] >= level ? 1 : 0) << k;
        if (code == 0 || code == 15) continue;
        std::vector<int> hit;
        for (int k = 0; k < 4; ++k) {
          bool s0 = (code >> k) & 1;
          bool s1 = (code >> ((k + 1) % 4)) & 1;
          if (s0 != s1) hit.push_back(k);
        }
        auto link = [&](int a, int b) {
          EdgeKey ea = cross(edges[a]);
          EdgeKey eb = cross(edges[b]);
          links.emplace(ea, eb);
          links.emplace(eb, ea);
        };
        if (hit.size() == 2) {
          link(hit[0], hit[1]);
        } else {
          // saddle: corners 0 and 2 share a side
          double centre = 0.25 * (c[0] + c[1] + c[2] + c[3]);
          bool centre_high = centre >= level;
          bool corner0_high = code & 1;
          if (centre_high == corner0_high) {
            link(0, 1);
            link(2, 3);
          } else {
            link(0, 3);
            link(1, 2);
          }
        }
      }
    }

    std::map<EdgeKey, int> degree;
    for (const auto& [a, b] : links) ++degree[a];
    std::multimap<EdgeKey, EdgeKey> remaining = links;
    auto take = [&](const EdgeKey& from) -> std::optional<EdgeKey> {
      auto it = remaining.find(from);
      if (it == remaining.end()) return std::nullopt;
      EdgeKey to = it->second;
      remaining.erase(it);
      auto range = remaining.equal_range(to);
      for (auto r = range.first; r != range.second; ++r) {
        if (r->second == from) {
          remaining.erase(r);
          break;
        }
      }
      return to;
    };
    auto trace = [&](EdgeKey start) {
      Polyline line;
      line.level = level;
      line.points.push_back(crossing[start]);
      EdgeKey cur = start;
      while (auto next = take(cur)) {
        line.points.push_back(crossing[*next]);
        cur = *next;
        if (cur == start) {
          line.closed = true;
          break;
        }
      }
      out.push_back(std::move(line));
    };
    // open chains start at degree-1 crossings (the slice boundary)
    for (const auto& [e, d] : degree) {
      if (d == 1 && remaining.count(e)) trace(e);
    }
    while (!remaining.empty()) trace(remaining.begin()->first);
  }
  return out;
}

void write_levelsets_csv(std::ostream& out, const Slice& slice,
                         const std::vector<Polyline>& lines) {
  out << 'x' << slice.axis_x + 1 << ",x" << slice.axis_y + 1 << ",level\n";
  char buf[96];
  bool first = true;
  for (const auto& line : lines) {
    if (!first) out << '\n';
    first = false;
    for (const auto& p : line.points) {
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", p[0], p[1], line.level);
      out << buf;
    }
  }
}

}  // namespace pedecomp
