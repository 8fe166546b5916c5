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

#ifndef SGNAV_PLANNER_HPP_
#define SGNAV_PLANNER_HPP_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sgnav/geometry.hpp"
#include "sgnav/mapping.hpp"

namespace sgnav {

enum class Action { kMoveForward, kTurnLeft, kTurnRight, kStop };

inline constexpr double kForwardStep = 0.25;  // meters per move_forward
inline constexpr int kTurnStep = 30;          // degrees per turn
inline constexpr int kMaxEpisodeSteps = 500;
inline constexpr double kArrivalTolerance = kForwardStep / 2;

std::string_view to_string(Action a);
std::optional<Action> action_from_string(std::string_view s);

struct PlannerOptions {
  double unknown_cost = 2.0;  // relative to a free cell
  bool unknown_traversable = true;
  // Soft clearance around occupied cells; 0 disables it.
  double inflation_radius = 0.0;
  double inflation_cost = 3.0;
  int window_margin = 20;  // cells around known space and endpoints
};

/// Eikonal arrival times (in cost-weighted meters) from a seed set.
class GeodesicField {
 public:
  GeodesicField(CellBox box, std::vector<double> values)
      : box_(box), values_(std::move(values)) {}

  const CellBox& box() const { return box_; }
  double at(Cell c) const;
  bool reachable(Cell c) const { return at(c) < kUnreachable; }

 private:
  CellBox box_;
  std::vector<double> values_;
};

/// First-order, 4-neighbour upwind fast marching. Occupied cells are never
/// entered; unknown cells cost options.unknown_cost.
GeodesicField fast_marching(const OccupancyGrid& grid,
                            std::span<const Cell> seeds,
                            const PlannerOptions& options,
                            std::span<const Cell> extra_window = {});

struct Path {
  std::vector<Vec2> waypoints;  // consecutive points at most 2 cells apart
  double length = 0.0;
};

/// Gradient descent on the fast-marching field from start to any goal cell.
std::optional<Path> plan_path_to_cells(const OccupancyGrid& grid, Vec2 start,
                                       std::span<const Cell> goal_cells,
                                       const PlannerOptions& options = {});

std::optional<Path> plan_path(const OccupancyGrid& grid, Vec2 start, Vec2 goal,
                              const PlannerOptions& options = {});

/// True when the straight segment between consecutive waypoints never enters
/// an occupied cell.
bool path_is_clear(const OccupancyGrid& grid, const Path& path);

struct FollowOptions {
  double deadband_deg = 20.0;
  double lookahead = 0.5;
  bool stop_at_end = false;
  double stop_radius = kForwardStep;
};

/// First waypoint at least options.lookahead ahead of the closest one, or the
/// final waypoint.
Vec2 lookahead_point(const Pose& pose, std::span<const Vec2> waypoints,
                     const FollowOptions& options = {});

/// Discretizes waypoint following into the action set.
Action next_action(const Pose& pose, std::span<const Vec2> waypoints,
                   const FollowOptions& options = {});

/// Pose after applying an action in free space.
Pose apply_action(const Pose& pose, Action a);

/// Plans toward a goal cell set and follows the plan, replanning on a fixed
/// cadence, after collisions, or when the agent drifts from the path.
class Navigator {
 public:
  enum class Status { kMoving, kArrived, kUnreachable };

  struct Step {
    Status status = Status::kMoving;
    Action action = Action::kStop;
  };

  explicit Navigator(PlannerOptions options = {}, int replan_interval = 8);

  void set_goal(std::vector<Cell> goal_cells);
  const std::vector<Cell>& goal() const { return goal_; }
  bool has_goal() const { return !goal_.empty(); }
  void clear();
  void notify_collision() { force_replan_ = true; }

  bool at_goal(const OccupancyGrid& grid, const Pose& pose) const;
  Step step(const OccupancyGrid& grid, const Pose& pose);

  const std::optional<Path>& path() const { return path_; }

 private:
  PlannerOptions options_;
  int replan_interval_;
  std::vector<Cell> goal_;  // sorted
  std::optional<Path> path_;
  int steps_since_plan_ = 0;
  bool force_replan_ = true;
  std::optional<int> detour_heading_;
};

/// Cells within radius (meters) of any cell in `from`, excluding occupied
/// cells; optionally also requiring distance >= min_center_dist from center.
std::vector<Cell> cells_within(const OccupancyGrid& grid,
                               std::span<const Cell> from, double radius,
                               std::optional<Vec2> center = std::nullopt,
                               double min_center_dist = 0.0);

struct ApproachOptions {
  double approach_radius = 1.5;  // from the candidate footprint
  double min_view_range = 1.65;  // keep the centroid inside sensor range
  double final_radius = 0.75;    // stop distance once accepted
  int n_max = 10;
  double face_tolerance_deg = 15.0;
};

/// Approach a goal candidate, observe it from several headings, then either
/// finish at the goal (accept) or hand control back (reject).
class ApproachAndObserve {
 public:
  enum class Phase { kTravel, kFace, kObserve, kFinal, kDone, kRejected };
  enum class Verdict { kAccept, kContinue, kReject };

  struct Step {
    std::optional<Action> action;  // nullopt once done or rejected
    bool observe = false;  // the current frame counts as one observation
  };

  ApproachAndObserve(Vec2 candidate, std::vector<Cell> footprint,
                     ApproachOptions options = {},
                     PlannerOptions planner = {});

  /// Next step. When `observe` is set the caller must score the current
  /// frame and call report_verdict before the returned action executes.
  Step next(const OccupancyGrid& grid, const Pose& pose);
  void report_verdict(Verdict v);
  /// Abandons the current viewpoint (the candidate is not in view) and
  /// travels to another one. Returns false once the replan budget is spent;
  /// the caller then scores the frame as usual.
  bool relocate(const OccupancyGrid& grid, const Pose& pose);
  /// Skip re-perception and go straight to the candidate.
  void accept_immediately();
  void notify_collision() { nav_.notify_collision(); }

  Phase phase() const { return phase_; }
  int observations() const { return observations_; }
  int travel_actions() const { return travel_actions_; }
  Vec2 candidate() const { return candidate_; }

 private:
  static constexpr int kMaxViewpointReplans = 8;
  static constexpr double kAbandonRadius = 0.5;

  bool line_of_sight(const OccupancyGrid& grid, Cell from) const;

  Vec2 candidate_;
  std::vector<Cell> footprint_;
  ApproachOptions options_;
  Navigator nav_;
  std::vector<Cell> sorted_footprint_;
  int replans_ = 0;
  std::vector<Cell> abandoned_;
  Phase phase_ = Phase::kTravel;
  bool goal_set_ = false;
  int observations_ = 0;
  int travel_actions_ = 0;
  int rotation_index_ = 0;
  bool awaiting_rotation_ = false;
};

}  // namespace sgnav

#endif  // SGNAV_PLANNER_HPP_
