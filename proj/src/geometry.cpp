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

#include "sgnav/geometry.hpp"

#include <algorithm>
#include <cstdlib>

namespace sgnav {

double Segment::orientation_deg() const {
  double deg = rad_to_deg(std::atan2(b.y - a.y, b.x - a.x));
  deg = std::fmod(deg, 180.0);
  if (deg < 0) deg += 180.0;
  if (deg >= 180.0) deg -= 180.0;
  return deg;
}

double deg_to_rad(double deg) { return deg * kPi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

double wrap_deg(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

double line_angle_between_deg(double a_deg, double b_deg) {
  double d = std::fabs(std::fmod(a_deg - b_deg, 180.0));
  if (d > 90.0) d = 180.0 - d;
  return d;
}

double point_segment_distance(Vec2 p, const Segment& s) {
  const Vec2 ab = s.b - s.a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, s.a);
  const double t = std::clamp(dot(p - s.a, ab) / len2, 0.0, 1.0);
  return distance(p, s.a + ab * t);
}

std::vector<Cell> line_cells(Cell a, Cell b) {
  // Bresenham with both cells emitted on diagonal steps, so no occupied
  // cell can be skipped by a corner crossing.
  std::vector<Cell> out;
  int x = a.x;
  int y = a.y;
  const int dx = std::abs(b.x - a.x);
  const int dy = std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  int err = dx - dy;
  out.push_back({x, y});
  while (x != b.x || y != b.y) {
    const int e2 = 2 * err;
    const bool step_x = e2 > -dy;
    const bool step_y = e2 < dx;
    if (step_x && step_y) {
      out.push_back({x + sx, y});
      out.push_back({x, y + sy});
    }
    if (step_x) {
      err -= dy;
      x += sx;
    }
    if (step_y) {
      err += dx;
      y += sy;
    }
    out.push_back({x, y});
  }
  return out;
}

}  // namespace sgnav
