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

#include "sgnav/mapping.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <queue>

#include <json.hpp>

#include "sgnav/errors.hpp"

namespace sgnav {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

constexpr int kDx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};

bool traversable(const OccupancyGrid& grid, Cell c, bool unknown_ok) {
  if (!grid.in_bounds(c)) return false;
  const CellState s = grid.at(c);
  return s == CellState::kFree || (unknown_ok && s == CellState::kUnknown);
}

}  // namespace

CellBox CellBox::united(Cell c) const {
  if (empty()) return {c.x, c.y, c.x, c.y};
  return {std::min(x0, c.x), std::min(y0, c.y), std::max(x1, c.x),
          std::max(y1, c.y)};
}

CellBox CellBox::clipped(int width, int height) const {
  return {std::max(x0, 0), std::max(y0, 0), std::min(x1, width - 1),
          std::min(y1, height - 1)};
}

OccupancyGrid::OccupancyGrid(GridSpec spec)
    : spec_(spec),
      cells_(static_cast<std::size_t>(spec.width) *
                 static_cast<std::size_t>(spec.height),
             CellState::kUnknown) {
  if (spec.width <= 0 || spec.height <= 0 || spec.resolution <= 0.0) {
    throw InputError("grid dimensions and resolution must be positive");
  }
}

bool OccupancyGrid::set(Cell c, CellState s) {
  if (!in_bounds(c)) return false;
  CellState& cur = cells_[index(c)];
  if (cur == s) return false;
  if (cur == CellState::kOccupied) return false;
  if (s == CellState::kUnknown) return false;
  cur = s;
  known_ = known_.united(c);
  return true;
}

Cell OccupancyGrid::to_cell(Vec2 p) const {
  return {static_cast<int>(std::floor((p.x - spec_.origin.x) / spec_.resolution)),
          static_cast<int>(std::floor((p.y - spec_.origin.y) / spec_.resolution))};
}

Vec2 OccupancyGrid::cell_center(Cell c) const {
  return {spec_.origin.x + (c.x + 0.5) * spec_.resolution,
          spec_.origin.y + (c.y + 0.5) * spec_.resolution};
}

std::size_t OccupancyGrid::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

int normalize_heading(int deg) {
  int h = deg % 360;
  if (h < 0) h += 360;
  return h;
}

Vec2 heading_vector(double heading_deg) {
  const double r = deg_to_rad(heading_deg);
  return {std::cos(r), std::sin(r)};
}

Vec2 ray_point(const Pose& pose, double bearing_deg, double t) {
  return pose.position + heading_vector(pose.heading_deg + bearing_deg) * t;
}

std::size_t integrate_depth(OccupancyGrid& grid, const Pose& pose,
                            const DepthScan& scan, const SensorConfig& sensor) {
  if (!grid.contains(pose.position)) {
    throw EpisodeFault("pose lies outside the occupancy grid");
  }
  const Cell origin = grid.to_cell(pose.position);
  std::size_t changed = 0;
  for (const DepthRay& ray : scan.rays) {
    const bool hit = ray.hit && ray.range <= sensor.max_range;
    const double range = std::min(ray.range, sensor.max_range);
    const Cell end = grid.to_cell(ray_point(pose, ray.bearing_deg, range));
    const std::vector<Cell> cells = line_cells(origin, end);
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
      if (grid.set(cells[i], CellState::kFree)) ++changed;
    }
    if (grid.set(end, hit ? CellState::kOccupied : CellState::kFree)) ++changed;
  }
  return changed;
}

bool is_frontier_cell(const OccupancyGrid& grid, Cell c) {
  if (!grid.in_bounds(c) || grid.at(c) != CellState::kFree) return false;
  for (int k = 0; k < 4; ++k) {
    const Cell n{c.x + kDx8[k], c.y + kDy8[k]};
    if (grid.in_bounds(n) && grid.at(n) == CellState::kUnknown) return true;
  }
  return false;
}

std::vector<Frontier> extract_frontiers(const OccupancyGrid& grid,
                                        std::size_t min_cluster_size) {
  std::vector<Frontier> out;
  const CellBox box = grid.known_bounds();
  if (box.empty()) return out;
  const int w = box.width();
  const int h = box.height();
  std::vector<std::uint8_t> mark(static_cast<std::size_t>(w) * h, 0);
  auto local = [&](Cell c) {
    return static_cast<std::size_t>(c.y - box.y0) * w + (c.x - box.x0);
  };
  for (int y = box.y0; y <= box.y1; ++y) {
    for (int x = box.x0; x <= box.x1; ++x) {
      if (is_frontier_cell(grid, {x, y})) mark[local({x, y})] = 1;
    }
  }
  for (int y = box.y0; y <= box.y1; ++y) {
    for (int x = box.x0; x <= box.x1; ++x) {
      if (mark[local({x, y})] != 1) continue;
      Frontier f;
      std::vector<Cell> stack{{x, y}};
      mark[local({x, y})] = 2;
      while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        f.cells.push_back(c);
        for (int k = 0; k < 8; ++k) {
          const Cell n{c.x + kDx8[k], c.y + kDy8[k]};
          if (!box.contains(n) || mark[local(n)] != 1) continue;
          mark[local(n)] = 2;
          stack.push_back(n);
        }
      }
      if (f.cells.size() < min_cluster_size) continue;
      std::sort(f.cells.begin(), f.cells.end());
      Vec2 sum;
      for (const Cell& c : f.cells) sum = sum + grid.cell_center(c);
      f.centroid = sum * (1.0 / static_cast<double>(f.cells.size()));
      f.anchor = *std::min_element(
          f.cells.begin(), f.cells.end(), [&](const Cell& a, const Cell& b) {
            return distance(grid.cell_center(a), f.centroid) <
                   distance(grid.cell_center(b), f.centroid);
          });
      out.push_back(std::move(f));
    }
  }
  return out;
}

double DistanceField::at(Cell c) const {
  if (!box_.contains(c)) return kUnreachable;
  return values_[static_cast<std::size_t>(c.y - box_.y0) * box_.width() +
                 (c.x - box_.x0)];
}

CellBox default_window(const OccupancyGrid& grid, std::span<const Cell> extra,
                       int margin) {
  CellBox box = grid.known_bounds();
  for (const Cell& c : extra) box = box.united(c);
  if (box.empty()) return box;
  return box.expanded(margin).clipped(grid.width(), grid.height());
}

DistanceField distance_field(const OccupancyGrid& grid,
                             std::span<const Cell> seeds,
                             const GeodesicOptions& options,
                             std::optional<CellBox> window) {
  const CellBox box = window ? window->clipped(grid.width(), grid.height())
                             : default_window(grid, seeds);
  std::vector<double> dist(
      static_cast<std::size_t>(box.width()) * box.height(), kUnreachable);
  if (box.empty()) return {box, std::move(dist)};
  const int w = box.width();
  auto local = [&](Cell c) {
    return static_cast<std::size_t>(c.y - box.y0) * w + (c.x - box.x0);
  };
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  for (const Cell& s : seeds) {
    if (!box.contains(s)) continue;
    dist[local(s)] = 0.0;
    open.push({0.0, local(s)});
  }
  const double res = grid.resolution();
  const bool unk = options.unknown_traversable;
  while (!open.empty()) {
    const auto [d, idx] = open.top();
    open.pop();
    if (d > dist[idx]) continue;
    const Cell c{box.x0 + static_cast<int>(idx % w),
                 box.y0 + static_cast<int>(idx / w)};
    for (int k = 0; k < 8; ++k) {
      const Cell n{c.x + kDx8[k], c.y + kDy8[k]};
      if (!box.contains(n) || !traversable(grid, n, unk)) continue;
      const bool diagonal = k >= 4;
      if (diagonal && (!traversable(grid, {c.x + kDx8[k], c.y}, unk) ||
                       !traversable(grid, {c.x, c.y + kDy8[k]}, unk))) {
        continue;
      }
      const double nd = d + res * (diagonal ? kSqrt2 : 1.0);
      const std::size_t ni = local(n);
      if (nd < dist[ni]) {
        dist[ni] = nd;
        open.push({nd, ni});
      }
    }
  }
  return {box, std::move(dist)};
}

std::optional<Cell> snap_to_traversable(const OccupancyGrid& grid, Cell c,
                                        double radius_m, bool unknown_ok) {
  if (traversable(grid, c, unknown_ok)) return c;
  const int r = static_cast<int>(std::floor(radius_m / grid.resolution()));
  std::optional<Cell> best;
  double best_d = kUnreachable;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double d = std::hypot(dx, dy) * grid.resolution();
      if (d > radius_m + 1e-12 || d >= best_d) continue;
      const Cell n{c.x + dx, c.y + dy};
      if (traversable(grid, n, unknown_ok)) {
        best = n;
        best_d = d;
      }
    }
  }
  return best;
}

std::optional<double> geodesic_distance(const OccupancyGrid& grid, Vec2 a,
                                        Vec2 b,
                                        const GeodesicOptions& options) {
  const bool unk = options.unknown_traversable;
  const auto sa = snap_to_traversable(grid, grid.to_cell(a), options.snap_radius, unk);
  const auto sb = snap_to_traversable(grid, grid.to_cell(b), options.snap_radius, unk);
  if (!sa || !sb) return std::nullopt;
  const Cell start = *sa;
  const Cell goal = *sb;
  if (start == goal) return 0.0;

  // A* with the octile heuristic, which is consistent for this move set.
  std::array<Cell, 2> ends{start, goal};
  const CellBox box = default_window(grid, ends);
  const int w = box.width();
  auto local = [&](Cell c) {
    return static_cast<std::size_t>(c.y - box.y0) * w + (c.x - box.x0);
  };
  const double res = grid.resolution();
  auto heuristic = [&](Cell c) {
    const int dx = std::abs(c.x - goal.x);
    const int dy = std::abs(c.y - goal.y);
    return res * (std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy));
  };
  std::vector<double> g(static_cast<std::size_t>(w) * box.height(), kUnreachable);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[local(start)] = 0.0;
  open.push({heuristic(start), local(start)});
  const std::size_t goal_idx = local(goal);
  while (!open.empty()) {
    const auto [f, idx] = open.top();
    open.pop();
    const Cell c{box.x0 + static_cast<int>(idx % w),
                 box.y0 + static_cast<int>(idx / w)};
    if (f > g[idx] + heuristic(c) + 1e-12) continue;
    if (idx == goal_idx) return g[idx];
    for (int k = 0; k < 8; ++k) {
      const Cell n{c.x + kDx8[k], c.y + kDy8[k]};
      if (!box.contains(n) || !traversable(grid, n, unk)) continue;
      const bool diagonal = k >= 4;
      if (diagonal && (!traversable(grid, {c.x + kDx8[k], c.y}, unk) ||
                       !traversable(grid, {c.x, c.y + kDy8[k]}, unk))) {
        continue;
      }
      const double ng = g[idx] + res * (diagonal ? kSqrt2 : 1.0);
      const std::size_t ni = local(n);
      if (ng < g[ni]) {
        g[ni] = ng;
        open.push({ng + heuristic(n), ni});
      }
    }
  }
  return std::nullopt;
}

void write_pgm(const OccupancyGrid& grid, std::ostream& out,
               std::optional<CellBox> window) {
  const CellBox box = window ? window->clipped(grid.width(), grid.height())
                             : CellBox{0, 0, grid.width() - 1, grid.height() - 1};
  out << "P5\n" << box.width() << ' ' << box.height() << "\n255\n";
  // Image rows run top to bottom, so emit the highest y first.
  for (int y = box.y1; y >= box.y0; --y) {
    for (int x = box.x0; x <= box.x1; ++x) {
      unsigned char v = 128;
      switch (grid.at({x, y})) {
        case CellState::kFree: v = 255; break;
        case CellState::kOccupied: v = 0; break;
        case CellState::kUnknown: v = 128; break;
      }
      out.put(static_cast<char>(v));
    }
  }
}

std::string dump_cells(const OccupancyGrid& grid) {
  nlohmann::json j;
  j["width"] = grid.width();
  j["height"] = grid.height();
  j["resolution"] = grid.resolution();
  j["origin"] = {grid.spec().origin.x, grid.spec().origin.y};
  nlohmann::json rows = nlohmann::json::array();
  std::string row(static_cast<std::size_t>(grid.width()), '?');
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      switch (grid.at({x, y})) {
        case CellState::kFree: row[x] = '.'; break;
        case CellState::kOccupied: row[x] = '#'; break;
        case CellState::kUnknown: row[x] = '?'; break;
      }
    }
    rows.push_back(row);
  }
  j["rows"] = std::move(rows);
  return j.dump();
}

}  // namespace sgnav
