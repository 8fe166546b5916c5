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

#ifndef SGNAV_MAPPING_HPP_
#define SGNAV_MAPPING_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgnav/geometry.hpp"

namespace sgnav {

enum class CellState : std::uint8_t { kUnknown = 0, kFree = 1, kOccupied = 2 };

struct GridSpec {
  int width = 800;
  int height = 800;
  double resolution = 0.05;  // meters per cell
  Vec2 origin{-20.0, -20.0};  // world position of the corner of cell (0, 0)
};

/// Inclusive rectangle of cells.
struct CellBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;
  int y1 = -1;

  bool empty() const { return x1 < x0 || y1 < y0; }
  bool contains(Cell c) const {
    return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1;
  }
  int width() const { return empty() ? 0 : x1 - x0 + 1; }
  int height() const { return empty() ? 0 : y1 - y0 + 1; }
  CellBox expanded(int margin) const {
    return {x0 - margin, y0 - margin, x1 + margin, y1 + margin};
  }
  CellBox united(Cell c) const;
  CellBox clipped(int width, int height) const;
};

/// Bird's-eye-view occupancy grid. Cells start unknown; occupied cells never
/// revert and known cells never return to unknown.
class OccupancyGrid {
 public:
  explicit OccupancyGrid(GridSpec spec = {});

  const GridSpec& spec() const { return spec_; }
  int width() const { return spec_.width; }
  int height() const { return spec_.height; }
  double resolution() const { return spec_.resolution; }

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < spec_.width && c.y < spec_.height;
  }
  bool contains(Vec2 p) const { return in_bounds(to_cell(p)); }

  /// Out-of-bounds cells read as unknown.
  CellState at(Cell c) const {
    return in_bounds(c) ? cells_[index(c)] : CellState::kUnknown;
  }
  bool is_occupied(Cell c) const { return at(c) == CellState::kOccupied; }
  bool is_free(Cell c) const { return at(c) == CellState::kFree; }

  /// Applies a transition if it is legal. Returns true when the cell changed.
  bool set(Cell c, CellState s);

  Cell to_cell(Vec2 p) const;
  Vec2 cell_center(Cell c) const;

  std::size_t count(CellState s) const;

  /// Bounding box of every non-unknown cell; empty when nothing is known.
  CellBox known_bounds() const { return known_; }

  std::span<const CellState> cells() const { return cells_; }

 private:
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(spec_.width) +
           static_cast<std::size_t>(c.x);
  }

  GridSpec spec_;
  std::vector<CellState> cells_;
  CellBox known_;
};

/// Agent pose. Heading is in degrees, counter-clockwise from +x, always a
/// multiple of 30 in [0, 360).
struct Pose {
  Vec2 position;
  int heading_deg = 0;

  friend bool operator==(const Pose&, const Pose&) = default;
};

int normalize_heading(int deg);
Vec2 heading_vector(double heading_deg);

struct SensorConfig {
  double min_range = 1.5;
  double max_range = 10.0;
  double hfov_deg = 90.0;
  int num_rays = 60;
};

struct DepthRay {
  double bearing_deg = 0.0;  // relative to heading, positive = left
  double range = 0.0;        // meters to the first return
  bool hit = false;          // false: nothing within max range
};

struct DepthScan {
  std::vector<DepthRay> rays;
};

/// World point at distance t along a ray. Shared by the simulator so that
/// the cell a hit lands in is computed identically on both sides.
Vec2 ray_point(const Pose& pose, double bearing_deg, double t);

/// Carves free space along each ray and marks hit cells occupied. Returns the
/// number of cells whose state changed.
std::size_t integrate_depth(OccupancyGrid& grid, const Pose& pose,
                            const DepthScan& scan,
                            const SensorConfig& sensor = {});

struct Frontier {
  std::vector<Cell> cells;
  Vec2 centroid;
  Cell anchor;  // member cell closest to the centroid
};

inline constexpr std::size_t kDefaultMinFrontierSize = 4;

bool is_frontier_cell(const OccupancyGrid& grid, Cell c);

/// Free cells with an unknown 4-neighbour, grouped by 8-connectivity.
/// Clusters smaller than min_cluster_size are dropped.
std::vector<Frontier> extract_frontiers(
    const OccupancyGrid& grid,
    std::size_t min_cluster_size = kDefaultMinFrontierSize);

struct GeodesicOptions {
  bool unknown_traversable = true;
  double snap_radius = 0.25;  // meters
};

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// 8-connected shortest-path distance field over a window of the grid.
class DistanceField {
 public:
  DistanceField(CellBox box, std::vector<double> values)
      : box_(box), values_(std::move(values)) {}

  const CellBox& box() const { return box_; }
  double at(Cell c) const;
  double at(const OccupancyGrid& grid, Vec2 p) const {
    return at(grid.to_cell(p));
  }

 private:
  CellBox box_;
  std::vector<double> values_;
};

/// Window used for distance computations when none is given: known cells and
/// the seeds, expanded by a margin and clipped to the grid.
CellBox default_window(const OccupancyGrid& grid, std::span<const Cell> extra,
                       int margin = 20);

/// Multi-source Dijkstra in meters. Seeds may be occupied cells (distances to
/// an object are measured from its footprint); expansion only enters
/// traversable cells.
DistanceField distance_field(const OccupancyGrid& grid,
                             std::span<const Cell> seeds,
                             const GeodesicOptions& options = {},
                             std::optional<CellBox> window = std::nullopt);

/// Nearest traversable cell within radius, or nullopt.
std::optional<Cell> snap_to_traversable(const OccupancyGrid& grid, Cell c,
                                        double radius_m, bool unknown_ok);

/// Shortest obstacle-avoiding path length in meters, or nullopt when no path
/// exists.
std::optional<double> geodesic_distance(const OccupancyGrid& grid, Vec2 a,
                                        Vec2 b,
                                        const GeodesicOptions& options = {});

/// Binary PGM (P5): unknown = 128, free = 255, occupied = 0.
void write_pgm(const OccupancyGrid& grid, std::ostream& out,
               std::optional<CellBox> window = std::nullopt);

/// Structured text dump of every cell: '?' unknown, '.' free, '#' occupied.
std::string dump_cells(const OccupancyGrid& grid);

}  // namespace sgnav

#endif  // SGNAV_MAPPING_HPP_
