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

#ifndef SGNAV_SIMULATOR_HPP_
#define SGNAV_SIMULATOR_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sgnav/geometry.hpp"
#include "sgnav/mapping.hpp"
#include "sgnav/perception.hpp"
#include "sgnav/planner.hpp"

namespace sgnav {

inline constexpr int kSceneSchemaVersion = 1;

// --- object catalog ----------------------------------------------------------

enum class Side { kLeft, kRight, kTop, kBottom };

struct SatelliteTemplate {
  std::string category;
  double width = 0.0;   // along x
  double depth = 0.0;   // along y
  Side side = Side::kRight;
  double gap = 0.1;     // meters from the anchor's edge
};

struct ClusterTemplate {
  std::string anchor;
  double width = 0.0;
  double depth = 0.0;
  std::vector<SatelliteTemplate> satellites;
};

struct RoomTemplate {
  std::string room_type;
  std::vector<ClusterTemplate> clusters;  // in placement priority order
};

const std::vector<RoomTemplate>& room_templates();
/// Categories a scene goal is drawn from.
const std::vector<std::string>& goal_categories();

// --- scene -------------------------------------------------------------------

struct SceneRoom {
  int id = 0;
  std::string type;
  Vec2 min;  // axis-aligned rectangle along wall centre lines
  Vec2 max;

  std::vector<Vec2> polygon() const;  // counter-clockwise from min
  std::vector<Segment> walls() const;
  bool contains(Vec2 p) const {
    return p.x > min.x && p.x < max.x && p.y > min.y && p.y < max.y;
  }
};

struct SceneDoor {
  int room_a = 0;
  int room_b = 0;
  Segment opening;  // lies on the shared wall
};

struct SceneObject {
  int id = 0;
  std::string category;
  Vec2 position;  // centre
  Vec2 size;      // x extent, y extent
  double height = 0.8;
  int room = 0;
  int cluster = -1;  // objects placed together share a cluster id
  bool decoy = false;  // detected as the goal category

  Vec2 min() const { return position - size * 0.5; }
  Vec2 max() const { return position + size * 0.5; }
};

struct SceneRelation {
  int a = 0;
  int b = 0;
  std::string relation;
};

struct Scene {
  int schema_version = kSceneSchemaVersion;
  std::uint64_t seed = 0;
  GridSpec grid;
  std::vector<SceneRoom> rooms;
  std::vector<SceneDoor> doors;
  std::vector<SceneObject> objects;
  std::vector<SceneRelation> relations;
  std::map<std::string, std::vector<int>> goals;  // category -> genuine instances
  std::string goal_category;
  Pose start;
};

struct SceneParams {
  int min_rooms = 2;
  int max_rooms = 4;
  int min_objects = 3;   // per room
  int max_objects = 10;
  double false_positive_rate = 0.0;
  bool decoy_in_start_room = false;
  double relation_density = 1.0;  // fraction of true relations recorded
  std::string goal_category;      // empty: drawn from goal_categories()
  GridSpec grid;
};

/// Deterministic in (seed, params). Throws GenerationError when the
/// parameters cannot be satisfied.
Scene generate_scene(std::uint64_t seed, const SceneParams& params = {});

/// Empty when the scene is consistent: every object inside exactly one room,
/// ids unique, goals refer to genuine instances.
std::vector<std::string> validate_scene(const Scene& scene);

nlohmann::ordered_json scene_to_json(const Scene& scene);
/// Throws InputError on malformed or unsupported input.
Scene scene_from_json(const nlohmann::json& j);
std::string write_scene(const Scene& scene);
Scene read_scene(std::string_view text);

/// Gap between the footprint rectangles of two objects (0 when touching).
double rect_gap(const SceneObject& a, const SceneObject& b);

/// Geometric relation predicate shared by scene generation and the VLM oracle.
bool relation_holds(const Scene& scene, int a, int b, std::string_view relation);

// --- rasterized world ----------------------------------------------------------

/// The scene burned into grid form: true occupancy, walls, room regions and
/// object footprints.
class SceneWorld {
 public:
  explicit SceneWorld(const Scene& scene);

  const Scene& scene() const { return *scene_; }
  const OccupancyGrid& truth() const { return truth_; }
  bool is_wall(Cell c) const;
  const std::vector<Cell>& footprint(int object_id) const;
  const std::vector<Cell>& region(int room_id) const;
  std::optional<int> room_at(Vec2 p) const;
  const SceneObject& object(int id) const;

 private:
  const Scene* scene_;
  OccupancyGrid truth_;
  CellBox bounds_;
  std::vector<std::uint8_t> wall_;
  std::map<int, std::vector<Cell>> footprints_;
  std::map<int, std::vector<Cell>> regions_;
};

// --- episodes ------------------------------------------------------------------

struct SimulatorConfig {
  SensorConfig sensor;
  double success_distance = 1.0;  // d_s
  int max_steps = kMaxEpisodeSteps;
  double near_confidence = 0.95;
  double far_confidence = 0.6;  // at max range
  double confidence_noise = 0.05;
  double decoy_confidence_factor = 0.1;
};

enum class TerminationCause { kNone, kStopped, kBudgetExhausted, kExplorationExhausted, kAborted };

std::string_view to_string(TerminationCause c);

struct TraceEntry {
  int step = 0;
  Action action = Action::kStop;
  Pose pose;  // after the action
  bool collision = false;
};

struct EpisodeState {
  Pose pose;
  int steps = 0;
  std::string goal;
  std::vector<TraceEntry> trace;
  bool terminated = false;
  TerminationCause cause = TerminationCause::kNone;
  bool stop_issued = false;
  double path_length = 0.0;
  int collisions = 0;
};

struct Observation {
  DepthScan scan;
  std::vector<DetectionObservation> detections;
  std::vector<RoomObservation> rooms;
  std::vector<int> covisible;  // truth ids detected in this frame
};

class Simulator {
 public:
  Simulator(const Scene& scene, std::string goal, SimulatorConfig config = {});

  EpisodeState reset() const;
  Observation observe(const Pose& pose, int step) const;

  struct StepOutcome {
    EpisodeState state;
    Observation observation;
    bool collision = false;
    std::optional<Cell> contact;  // first blocked cell on a failed move
  };

  /// Throws EpisodeFault after termination.
  StepOutcome step(const EpisodeState& state, Action action) const;

  bool check_success(const EpisodeState& state) const;
  /// Geodesic distance on the true map to the nearest genuine goal instance.
  double distance_to_goal(Vec2 p) const;
  double optimal_path_length() const;

  /// Range, field-of-view and wall-occlusion test.
  bool visible(const SceneObject& object, const Pose& pose) const;
  DepthScan depth_scan(const Pose& pose) const;

  const SceneWorld& world() const { return world_; }
  const SimulatorConfig& config() const { return config_; }
  const std::string& goal() const { return goal_; }

 private:
  double confidence(const SceneObject& o, double range, int step) const;

  const Scene& scene_;
  std::string goal_;
  SimulatorConfig config_;
  SceneWorld world_;
  std::vector<Cell> goal_cells_;
  std::optional<DistanceField> goal_field_;
};

}  // namespace sgnav

#endif  // SGNAV_SIMULATOR_HPP_
