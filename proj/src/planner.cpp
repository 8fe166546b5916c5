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

#include "sgnav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>

namespace sgnav {

namespace {

constexpr int kDx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};

// Per-cell traversal cost multipliers over a window; infinity = blocked.
class CostMap {
 public:
  CostMap(const OccupancyGrid& grid, CellBox box, const PlannerOptions& opt)
      : box_(box),
        cost_(static_cast<std::size_t>(box.width()) * box.height(), 1.0) {
    const int r = opt.inflation_radius > 0.0
                      ? static_cast<int>(std::ceil(opt.inflation_radius /
                                                   grid.resolution()))
                      : 0;
    std::vector<double> clearance;
    if (r > 0) clearance.assign(cost_.size(), kUnreachable);
    for (int y = box.y0; y <= box.y1; ++y) {
      for (int x = box.x0; x <= box.x1; ++x) {
        const CellState s = grid.at({x, y});
        double& c = cost_[index({x, y})];
        if (s == CellState::kOccupied) {
          c = kUnreachable;
          for (int dy = -r; dy <= r && r > 0; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
              const Cell n{x + dx, y + dy};
              if (!box.contains(n)) continue;
              const double d = std::hypot(dx, dy) * grid.resolution();
              double& cl = clearance[index(n)];
              cl = std::min(cl, d);
            }
          }
        } else if (s == CellState::kUnknown) {
          c = opt.unknown_traversable ? opt.unknown_cost : kUnreachable;
        }
      }
    }
    if (r > 0) {
      for (std::size_t i = 0; i < cost_.size(); ++i) {
        if (cost_[i] == kUnreachable || clearance[i] >= opt.inflation_radius) {
          continue;
        }
        cost_[i] *= 1.0 + opt.inflation_cost *
                              (1.0 - clearance[i] / opt.inflation_radius);
      }
    }
  }

  const CellBox& box() const { return box_; }
  double at(Cell c) const {
    return box_.contains(c) ? cost_[index(c)] : kUnreachable;
  }
  bool passable(Cell c) const { return at(c) < kUnreachable; }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y - box_.y0) * box_.width() +
           (c.x - box_.x0);
  }

 private:
  CellBox box_;
  std::vector<double> cost_;
};

GeodesicField march(const CostMap& costs, std::span<const Cell> seeds,
                    double res) {
  const CellBox& box = costs.box();
  const int w = box.width();
  std::vector<double> t(static_cast<std::size_t>(w) * box.height(),
                        kUnreachable);
  std::vector<std::uint8_t> done(t.size(), 0);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> trial;
  for (const Cell& s : seeds) {
    if (!costs.passable(s)) continue;
    t[costs.index(s)] = 0.0;
    trial.push({0.0, costs.index(s)});
  }
  auto known = [&](Cell c) {
    if (!box.contains(c)) return kUnreachable;
    const std::size_t i = costs.index(c);
    return done[i] ? t[i] : kUnreachable;
  };
  while (!trial.empty()) {
    const auto [tv, idx] = trial.top();
    trial.pop();
    if (done[idx] || tv > t[idx]) continue;
    done[idx] = 1;
    const Cell c{box.x0 + static_cast<int>(idx % w),
                 box.y0 + static_cast<int>(idx / w)};
    for (int k = 0; k < 4; ++k) {
      const Cell n{c.x + kDx8[k], c.y + kDy8[k]};
      if (!box.contains(n) || !costs.passable(n)) continue;
      const std::size_t ni = costs.index(n);
      if (done[ni]) continue;
      const double a = std::min(known({n.x - 1, n.y}), known({n.x + 1, n.y}));
      const double b = std::min(known({n.x, n.y - 1}), known({n.x, n.y + 1}));
      const double h = res * costs.at(n);
      double nt;
      if (a == kUnreachable || b == kUnreachable || std::fabs(a - b) >= h) {
        nt = std::min(a, b) + h;
      } else {
        nt = 0.5 * (a + b + std::sqrt(2.0 * h * h - (a - b) * (a - b)));
      }
      if (nt < t[ni]) {
        t[ni] = nt;
        trial.push({nt, ni});
      }
    }
  }
  return {box, std::move(t)};
}

bool segment_clear(const OccupancyGrid& grid, Vec2 a, Vec2 b) {
  for (const Cell& c : line_cells(grid.to_cell(a), grid.to_cell(b))) {
    if (grid.is_occupied(c)) return false;
  }
  return true;
}

// Segment stays on unit-cost cells (known free, outside inflation).
bool segment_cheap(const OccupancyGrid& grid, const CostMap& costs, Vec2 a,
                   Vec2 b) {
  for (const Cell& c : line_cells(grid.to_cell(a), grid.to_cell(b))) {
    if (costs.at(c) != 1.0) return false;
  }
  return true;
}

std::vector<Vec2> shortcut_and_resample(const OccupancyGrid& grid,
                                        const CostMap& costs,
                                        const std::vector<Vec2>& raw) {
  if (raw.size() <= 2) return raw;
  std::vector<Vec2> anchors{raw.front()};
  std::size_t i = 0;
  while (i + 1 < raw.size()) {
    std::size_t j = i + 1;
    while (j + 1 < raw.size() && segment_cheap(grid, costs, raw[i], raw[j + 1])) {
      ++j;
    }
    anchors.push_back(raw[j]);
    i = j;
  }
  const double spacing = 1.5 * grid.resolution();
  std::vector<Vec2> out{anchors.front()};
  for (std::size_t k = 1; k < anchors.size(); ++k) {
    const Vec2 a = anchors[k - 1];
    const Vec2 b = anchors[k];
    const int pieces =
        std::max(1, static_cast<int>(std::ceil(distance(a, b) / spacing)));
    for (int p = 1; p <= pieces; ++p) {
      out.push_back(a + (b - a) * (static_cast<double>(p) / pieces));
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Action a) {
  switch (a) {
    case Action::kMoveForward: return "move_forward";
    case Action::kTurnLeft: return "turn_left";
    case Action::kTurnRight: return "turn_right";
    case Action::kStop: return "stop";
  }
  return "stop";
}

std::optional<Action> action_from_string(std::string_view s) {
  if (s == "move_forward") return Action::kMoveForward;
  if (s == "turn_left") return Action::kTurnLeft;
  if (s == "turn_right") return Action::kTurnRight;
  if (s == "stop") return Action::kStop;
  return std::nullopt;
}

double GeodesicField::at(Cell c) const {
  if (!box_.contains(c)) return kUnreachable;
  return values_[static_cast<std::size_t>(c.y - box_.y0) * box_.width() +
                 (c.x - box_.x0)];
}

GeodesicField fast_marching(const OccupancyGrid& grid,
                            std::span<const Cell> seeds,
                            const PlannerOptions& options,
                            std::span<const Cell> extra_window) {
  std::vector<Cell> anchor(seeds.begin(), seeds.end());
  anchor.insert(anchor.end(), extra_window.begin(), extra_window.end());
  const CellBox box = default_window(grid, anchor, options.window_margin);
  const CostMap costs(grid, box, options);
  return march(costs, seeds, grid.resolution());
}

std::optional<Path> plan_path_to_cells(const OccupancyGrid& grid, Vec2 start,
                                       std::span<const Cell> goal_cells,
                                       const PlannerOptions& options) {
  if (goal_cells.empty()) return std::nullopt;
  const auto snapped = snap_to_traversable(grid, grid.to_cell(start), 0.25,
                                           options.unknown_traversable);
  if (!snapped) return std::nullopt;
  const Cell s = *snapped;

  std::vector<Cell> anchor(goal_cells.begin(), goal_cells.end());
  anchor.push_back(s);
  const CellBox box = default_window(grid, anchor, options.window_margin);
  const CostMap costs(grid, box, options);
  const GeodesicField field = march(costs, goal_cells, grid.resolution());
  if (!field.reachable(s)) return std::nullopt;

  Vec2 p = grid.to_cell(start) == s ? start : grid.cell_center(s);
  std::vector<Vec2> raw{p};
  Vec2 last = p;
  const double res = grid.resolution();
  const std::size_t limit = 16 * static_cast<std::size_t>(box.width() + 1) *
                            static_cast<std::size_t>(box.height() + 1);
  for (std::size_t iter = 0;; ++iter) {
    if (iter > limit) return std::nullopt;
    const Cell c = grid.to_cell(p);
    const double tc = field.at(c);
    if (tc == 0.0) break;

    auto diff = [&](Cell lo, Cell hi) {
      const double tl = field.at(lo);
      const double th = field.at(hi);
      if (tl < kUnreachable && th < kUnreachable) return 0.5 * (th - tl);
      if (th < kUnreachable) return th - tc;
      if (tl < kUnreachable) return tc - tl;
      return 0.0;
    };
    const double gx = diff({c.x - 1, c.y}, {c.x + 1, c.y});
    const double gy = diff({c.x, c.y - 1}, {c.x, c.y + 1});
    const double gn = std::hypot(gx, gy);
    bool moved = false;
    if (gn > 0.0) {
      const Vec2 q = p + Vec2{-gx / gn, -gy / gn} * (0.5 * res);
      const Cell cq = grid.to_cell(q);
      const bool corner_ok =
          cq.x == c.x || cq.y == c.y ||
          (costs.passable({cq.x, c.y}) && costs.passable({c.x, cq.y}));
      if (cq == c || (costs.passable(cq) && field.at(cq) < tc && corner_ok)) {
        p = q;
        moved = true;
      }
    }
    if (!moved) {
      std::optional<Cell> best;
      double best_t = tc;
      for (int k = 0; k < 8; ++k) {
        const Cell n{c.x + kDx8[k], c.y + kDy8[k]};
        if (k >= 4 && (!costs.passable({n.x, c.y}) ||
                       !costs.passable({c.x, n.y}))) {
          continue;
        }
        if (field.at(n) < best_t) {
          best_t = field.at(n);
          best = n;
        }
      }
      if (!best) return std::nullopt;
      p = grid.cell_center(*best);
    }
    if (distance(p, last) >= res) {
      raw.push_back(p);
      last = p;
    }
  }
  if (!(raw.back() == p)) raw.push_back(p);

  Path path;
  path.waypoints = shortcut_and_resample(grid, costs, raw);
  for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
    path.length += distance(path.waypoints[i - 1], path.waypoints[i]);
  }
  return path;
}

std::optional<Path> plan_path(const OccupancyGrid& grid, Vec2 start, Vec2 goal,
                              const PlannerOptions& options) {
  const auto g = snap_to_traversable(grid, grid.to_cell(goal), 0.25,
                                     options.unknown_traversable);
  if (!g) return std::nullopt;
  const Cell goal_cell[] = {*g};
  auto path = plan_path_to_cells(grid, start, goal_cell, options);
  if (path && !(path->waypoints.back() == goal) &&
      grid.to_cell(goal) == *g) {
    path->length += distance(path->waypoints.back(), goal);
    path->waypoints.push_back(goal);
  }
  return path;
}

bool path_is_clear(const OccupancyGrid& grid, const Path& path) {
  for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
    if (!segment_clear(grid, path.waypoints[i - 1], path.waypoints[i])) {
      return false;
    }
  }
  return true;
}

Vec2 lookahead_point(const Pose& pose, std::span<const Vec2> waypoints,
                     const FollowOptions& options) {
  if (waypoints.empty()) return pose.position;
  if (waypoints.size() == 1) return waypoints.front();
  // Closest segment, so sparse waypoint lists behave like dense ones.
  std::size_t seg = 0;
  double best = kUnreachable;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const double d = point_segment_distance(pose.position, {waypoints[i], waypoints[i + 1]});
    if (d < best) {
      best = d;
      seg = i;
    }
  }
  for (std::size_t i = seg + 1; i < waypoints.size(); ++i) {
    if (distance(pose.position, waypoints[i]) >= options.lookahead) {
      return waypoints[i];
    }
  }
  return waypoints.back();
}

Action next_action(const Pose& pose, std::span<const Vec2> waypoints,
                   const FollowOptions& options) {
  if (waypoints.empty()) return Action::kStop;
  if (options.stop_at_end &&
      distance(pose.position, waypoints.back()) <= options.stop_radius) {
    return Action::kStop;
  }
  const Vec2 d = lookahead_point(pose, waypoints, options) - pose.position;
  const double bearing =
      wrap_deg(rad_to_deg(std::atan2(d.y, d.x)) - pose.heading_deg);
  // The tolerance keeps a target exactly between two headings from
  // oscillating at the deadband edge.
  if (std::fabs(bearing) <= options.deadband_deg + 1e-6) return Action::kMoveForward;
  return bearing > 0.0 || bearing == 180.0 ? Action::kTurnLeft
                                           : Action::kTurnRight;
}

Pose apply_action(const Pose& pose, Action a) {
  Pose next = pose;
  switch (a) {
    case Action::kMoveForward:
      next.position = pose.position + heading_vector(pose.heading_deg) * kForwardStep;
      break;
    case Action::kTurnLeft:
      next.heading_deg = normalize_heading(pose.heading_deg + kTurnStep);
      break;
    case Action::kTurnRight:
      next.heading_deg = normalize_heading(pose.heading_deg - kTurnStep);
      break;
    case Action::kStop:
      break;
  }
  return next;
}

Navigator::Navigator(PlannerOptions options, int replan_interval)
    : options_(options), replan_interval_(replan_interval) {}

void Navigator::set_goal(std::vector<Cell> goal_cells) {
  detour_heading_.reset();
  std::sort(goal_cells.begin(), goal_cells.end());
  goal_cells.erase(std::unique(goal_cells.begin(), goal_cells.end()),
                   goal_cells.end());
  goal_ = std::move(goal_cells);
  path_.reset();
  force_replan_ = true;
}

void Navigator::clear() {
  detour_heading_.reset();
  goal_.clear();
  path_.reset();
  force_replan_ = true;
}

bool Navigator::at_goal(const OccupancyGrid& grid, const Pose& pose) const {
  // Moves land on a 0.25 m lattice, so thin goal regions are accepted
  // within half a step.
  const Cell c = grid.to_cell(pose.position);
  const int r = static_cast<int>(std::ceil(kArrivalTolerance / grid.resolution()));
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const Cell n{c.x + dx, c.y + dy};
      if (distance(grid.cell_center(n), pose.position) > kArrivalTolerance) continue;
      if (std::binary_search(goal_.begin(), goal_.end(), n)) return true;
    }
  }
  return false;
}

Navigator::Step Navigator::step(const OccupancyGrid& grid, const Pose& pose) {
  if (goal_.empty()) return {Status::kUnreachable, Action::kStop};
  if (at_goal(grid, pose)) return {Status::kArrived, Action::kStop};

  bool replan = force_replan_ || !path_ || steps_since_plan_ >= replan_interval_;
  if (!replan) {
    double nearest = kUnreachable;
    for (const Vec2& w : path_->waypoints) {
      nearest = std::min(nearest, distance(w, pose.position));
    }
    replan = nearest > 0.5;
  }
  if (replan) {
    path_ = plan_path_to_cells(grid, pose.position, goal_, options_);
    steps_since_plan_ = 0;
    force_replan_ = false;
    if (!path_) return {Status::kUnreachable, Action::kStop};
  }
  ++steps_since_plan_;
  if (detour_heading_) {
    if (pose.heading_deg == *detour_heading_) {
      detour_heading_.reset();
      if (segment_clear(grid, pose.position,
                        apply_action(pose, Action::kMoveForward).position)) {
        return {Status::kMoving, Action::kMoveForward};
      }
    } else {
      const double turn = wrap_deg(*detour_heading_ - pose.heading_deg);
      return {Status::kMoving, turn > 0.0 ? Action::kTurnLeft : Action::kTurnRight};
    }
  }
  Action a = next_action(pose, path_->waypoints);
  if (a == Action::kMoveForward &&
      !segment_clear(grid, pose.position,
                     apply_action(pose, a).position)) {
    // Commit to the free heading closest to the path direction so the
    // follower cannot undo the turn on the next step.
    force_replan_ = true;
    const Vec2 d = lookahead_point(pose, path_->waypoints, {}) - pose.position;
    const double desired = rad_to_deg(std::atan2(d.y, d.x));
    double best = kUnreachable;
    for (int h = 0; h < 360; h += kTurnStep) {
      if (h == pose.heading_deg) continue;
      Pose probe = pose;
      probe.heading_deg = h;
      if (!segment_clear(grid, pose.position,
                         apply_action(probe, Action::kMoveForward).position)) {
        continue;
      }
      const double off = std::fabs(wrap_deg(h - desired));
      if (off < best) {
        best = off;
        detour_heading_ = h;
      }
    }
    if (!detour_heading_) return {Status::kMoving, Action::kTurnLeft};
    const double turn = wrap_deg(*detour_heading_ - pose.heading_deg);
    a = turn > 0.0 ? Action::kTurnLeft : Action::kTurnRight;
  }
  return {Status::kMoving, a};
}

std::vector<Cell> cells_within(const OccupancyGrid& grid,
                               std::span<const Cell> from, double radius,
                               std::optional<Vec2> center,
                               double min_center_dist) {
  std::vector<Cell> out;
  if (from.empty()) return out;
  // Only boundary cells of `from` can be nearest to an outside cell.
  std::vector<Cell> sorted(from.begin(), from.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Vec2> edge;
  CellBox box;
  for (const Cell& c : sorted) {
    box = box.united(c);
    bool interior = true;
    for (int k = 0; k < 4 && interior; ++k) {
      interior = std::binary_search(sorted.begin(), sorted.end(),
                                    Cell{c.x + kDx8[k], c.y + kDy8[k]});
    }
    if (!interior) edge.push_back(grid.cell_center(c));
  }
  const int r = static_cast<int>(std::ceil(radius / grid.resolution()));
  const CellBox search = box.expanded(r).clipped(grid.width(), grid.height());
  for (int y = search.y0; y <= search.y1; ++y) {
    for (int x = search.x0; x <= search.x1; ++x) {
      const Cell c{x, y};
      if (grid.is_occupied(c)) continue;
      const Vec2 p = grid.cell_center(c);
      if (center && distance(p, *center) < min_center_dist) continue;
      for (const Vec2& e : edge) {
        if (distance(p, e) <= radius) {
          out.push_back(c);
          break;
        }
      }
    }
  }
  return out;
}

ApproachAndObserve::ApproachAndObserve(Vec2 candidate,
                                       std::vector<Cell> footprint,
                                       ApproachOptions options,
                                       PlannerOptions planner)
    : candidate_(candidate),
      footprint_(std::move(footprint)),
      options_(options),
      nav_(planner),
      sorted_footprint_(footprint_) {
  std::sort(sorted_footprint_.begin(), sorted_footprint_.end());
}

bool ApproachAndObserve::line_of_sight(const OccupancyGrid& grid, Cell from) const {
  const Cell target = grid.to_cell(candidate_);
  for (const Cell& c : line_cells(from, target)) {
    if (grid.is_occupied(c) &&
        !std::binary_search(sorted_footprint_.begin(), sorted_footprint_.end(), c)) {
      return false;
    }
  }
  return true;
}

void ApproachAndObserve::accept_immediately() {
  phase_ = Phase::kFinal;
  goal_set_ = false;
}

bool ApproachAndObserve::relocate(const OccupancyGrid& grid, const Pose& pose) {
  if (phase_ != Phase::kObserve || replans_ >= kMaxViewpointReplans) return false;
  ++replans_;
  --observations_;
  abandoned_.push_back(grid.to_cell(pose.position));
  phase_ = Phase::kTravel;
  goal_set_ = false;
  awaiting_rotation_ = false;
  return true;
}

void ApproachAndObserve::report_verdict(Verdict v) {
  if (phase_ != Phase::kObserve) return;
  switch (v) {
    case Verdict::kAccept:
      phase_ = Phase::kFinal;
      goal_set_ = false;
      break;
    case Verdict::kReject:
      phase_ = Phase::kRejected;
      break;
    case Verdict::kContinue:
      break;
  }
}

ApproachAndObserve::Step ApproachAndObserve::next(const OccupancyGrid& grid,
                                                  const Pose& pose) {
  // Alternating rotation keeps the candidate inside the field of view:
  // heading offsets cycle 0, +30, 0, -30.
  static constexpr Action kPattern[4] = {Action::kTurnLeft, Action::kTurnRight,
                                         Action::kTurnRight, Action::kTurnLeft};
  auto bearing_to_candidate = [&] {
    const Vec2 d = candidate_ - pose.position;
    return wrap_deg(rad_to_deg(std::atan2(d.y, d.x)) - pose.heading_deg);
  };

  switch (phase_) {
    case Phase::kTravel: {
      if (!goal_set_) {
        // Only viewpoints with a clear line of sight on the mapped grid can
        // contribute observations.
        std::vector<Cell> ring = cells_within(grid, footprint_, options_.approach_radius,
                                              candidate_, options_.min_view_range);
        std::erase_if(ring, [&](Cell c) {
          for (const Cell& v : abandoned_) {
            if (std::hypot(c.x - v.x, c.y - v.y) * grid.spec().resolution < kAbandonRadius) {
              return true;
            }
          }
          return !line_of_sight(grid, c);
        });
        nav_.set_goal(std::move(ring));
        goal_set_ = true;
      }
      if (!nav_.has_goal()) {
        phase_ = Phase::kRejected;
        return {};
      }
      const Navigator::Step s = nav_.step(grid, pose);
      if (s.status == Navigator::Status::kUnreachable) {
        phase_ = Phase::kRejected;
        return {};
      }
      if (s.status == Navigator::Status::kMoving) {
        ++travel_actions_;
        return {s.action, false};
      }
      // Walls mapped during travel can invalidate the chosen viewpoint.
      if (!line_of_sight(grid, grid.to_cell(pose.position)) &&
          replans_ < kMaxViewpointReplans) {
        ++replans_;
        abandoned_.push_back(grid.to_cell(pose.position));
        goal_set_ = false;
        return next(grid, pose);
      }
      phase_ = Phase::kFace;
      [[fallthrough]];
    }
    case Phase::kFace: {
      const double b = bearing_to_candidate();
      if (std::fabs(b) > options_.face_tolerance_deg) {
        return {b > 0.0 ? Action::kTurnLeft : Action::kTurnRight, false};
      }
      phase_ = Phase::kObserve;
      awaiting_rotation_ = false;
      [[fallthrough]];
    }
    case Phase::kObserve: {
      if (observations_ >= options_.n_max) {
        phase_ = Phase::kRejected;
        return {};
      }
      // The previous observation was scored and the verdict was "continue":
      // rotate for the next viewpoint, then observe again.
      if (awaiting_rotation_) {
        awaiting_rotation_ = false;
        return {kPattern[rotation_index_++ % 4], false};
      }
      ++observations_;
      awaiting_rotation_ = true;
      return {std::nullopt, true};
    }
    case Phase::kFinal: {
      if (!goal_set_) {
        nav_.set_goal(cells_within(grid, footprint_, options_.final_radius));
        goal_set_ = true;
      }
      const Navigator::Step s = nav_.step(grid, pose);
      if (s.status == Navigator::Status::kArrived) {
        phase_ = Phase::kDone;
        return {Action::kStop, false};
      }
      if (s.status == Navigator::Status::kUnreachable) {
        // Closest reachable point is the observation ring; stop here.
        phase_ = Phase::kDone;
        return {Action::kStop, false};
      }
      return {s.action, false};
    }
    case Phase::kDone:
    case Phase::kRejected:
      return {};
  }
  return {};
}

}  // namespace sgnav
