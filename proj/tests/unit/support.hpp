#pragma once

#include <string>
#include <vector>

#include "pedecomp/model.hpp"

namespace test {

using namespace pedecomp;

inline constexpr const char* kChannel = "if(abs(x2) < 0.5, 1 - 0.5*cos(pi*x1), 1)";

// Two pursuers on a line: y1' = -(2/3) a1 + b/2, y2' = -a2 + b/2.
inline GameSpec example1(double r = 0.1) {
  GameSpecParams p;
  p.m = 2;
  p.n = 1;
  p.r = r;
  p.g = {parse_field("2/3", 2), parse_field("1", 2)};
  p.h = {parse_field("1/2", 2), parse_field("1/2", 2)};
  return GameSpec(std::move(p));
}

// One subproblem of example1: g in {2/3, 1}, h = 1/2.
inline GameSpec line_game(const std::string& g, const std::string& h = "1/2", double r = 0.1) {
  GameSpecParams p;
  p.m = 1;
  p.n = 1;
  p.r = r;
  p.g = {parse_field(g, 1)};
  p.h = {parse_field(h, 1)};
  return GameSpec(std::move(p));
}

inline GameSpec constant_speed_game(int m, double r = 0.1) {
  GameSpecParams p;
  p.m = m;
  p.n = 1;
  p.r = r;
  p.g = {parse_field("1", m)};
  p.h = {parse_field("0.9", m)};
  return GameSpec(std::move(p));
}

inline GameSpec channel_game(int m, double r = 0.2) {
  GameSpecParams p;
  p.mode = CoordinateMode::kAbsolute;
  p.m = m;
  p.n = 2;
  p.r = r;
  p.g = {parse_field(kChannel, 2)};
  p.h = {parse_field("0.4", 2)};
  return GameSpec(std::move(p));
}

inline GameSpec failing_game() { return line_game("0.5", "1"); }

// Relative game whose Hamiltonian breaks the convex-combination inequality.
inline GameSpec violation_game() {
  GameSpecParams p;
  p.m = 2;
  p.n = 1;
  p.rho_b = 1.2;
  p.r = 0.1;
  p.g = {parse_field("1", 2), parse_field("1", 2)};
  p.h = {parse_field("0.1", 2), parse_field("1", 2)};
  return GameSpec(std::move(p));
}

}  // namespace test
