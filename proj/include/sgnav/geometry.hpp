// Copyright 2026 The sgnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SGNAV_GEOMETRY_HPP_
#define SGNAV_GEOMETRY_HPP_

#include <cmath>
#include <compare>
#include <cstdint>
#include <set>
#include <vector>

namespace sgnav {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend bool operator==(Vec2, Vec2) = default;

  double norm() const { return std::hypot(x, y); }
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec2 xy() const { return {x, y}; }
  friend bool operator==(Vec3, Vec3) = default;
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Integer grid coordinate. Ordered so it can live in std::set / std::map.
struct Cell {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

using CellSet = std::set<Cell>;

struct Segment {
  Vec2 a;
  Vec2 b;

  Vec2 midpoint() const { return (a + b) * 0.5; }
  double length() const { return distance(a, b); }
  /// Orientation of the undirected line in degrees, folded into [0, 180).
  double orientation_deg() const;
};

double deg_to_rad(double deg);
double rad_to_deg(double rad);

/// Wraps an angle in degrees to (-180, 180].
double wrap_deg(double deg);

/// Smallest angle between two undirected lines, in [0, 90].
double line_angle_between_deg(double a_deg, double b_deg);

/// Distance from point p to the closed segment s.
double point_segment_distance(Vec2 p, const Segment& s);

/// Cells visited by a supercover line walk from a to b (both inclusive).
std::vector<Cell> line_cells(Cell a, Cell b);

}  // namespace sgnav

#endif  // SGNAV_GEOMETRY_HPP_
