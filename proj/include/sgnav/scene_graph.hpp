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

#ifndef SGNAV_SCENE_GRAPH_HPP_
#define SGNAV_SCENE_GRAPH_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sgnav/errors.hpp"
#include "sgnav/geometry.hpp"
#include "sgnav/llm.hpp"
#include "sgnav/mapping.hpp"
#include "sgnav/perception.hpp"
#include "sgnav/prompts.hpp"

namespace sgnav {

using NodeId = std::uint32_t;

inline constexpr double kDefaultMergeRadius = 0.5;
inline constexpr double kDefaultParallelToleranceDeg = 15.0;

struct ObjectNode {
  NodeId id = 0;
  std::string category;
  double confidence = 0.0;
  Vec3 centroid;
  std::vector<Cell> footprint;  // sorted, unique
  int first_seen = 0;
  int last_seen = 0;
  int detections = 0;
  int truth_id = -1;
};

struct GroupNode {
  NodeId id = 0;
  std::vector<NodeId> members;  // sorted
  std::string label;
};

struct RoomNode {
  NodeId id = 0;
  std::string room_type;
  std::vector<Cell> region;  // sorted
  std::vector<Segment> walls;
  int truth_id = -1;

  bool contains(Cell c) const;
  /// Rebuilds the lookup mask after region changes.
  void index();

 private:
  CellBox bounds_;
  std::vector<std::uint8_t> mask_;
};

enum class RangeClass { kShort, kLong };

std::string_view to_string(RangeClass r);

struct RelationEdge {
  NodeId a = 0;  // "object1" in the prompt
  NodeId b = 0;
  std::string relation;
  RangeClass range_class = RangeClass::kShort;
  bool verified = false;
  bool flagged = false;  // kept without a VLM answer
  int proposed_at = 0;
};

struct AffiliationEdge {
  NodeId parent = 0;  // room
  NodeId child = 0;   // object or group

  friend auto operator<=>(const AffiliationEdge&, const AffiliationEdge&) = default;
};

/// Unordered category pairs that form groups. Lookups are case-insensitive.
class RelatedCategoryLexicon {
 public:
  RelatedCategoryLexicon() = default;
  static RelatedCategoryLexicon default_lexicon();

  void add(std::string_view a, std::string_view b);
  bool related(std::string_view a, std::string_view b) const;
  std::size_t size() const { return pairs_.size(); }
  const std::set<std::pair<std::string, std::string>>& pairs() const { return pairs_; }

 private:
  std::set<std::pair<std::string, std::string>> pairs_;
};

class SceneGraph {
 public:
  using RelationKey = std::pair<NodeId, NodeId>;  // (min, max)

  static RelationKey key(NodeId a, NodeId b) {
    return a < b ? RelationKey{a, b} : RelationKey{b, a};
  }

  // Node ids are shared across levels and never reused.
  NodeId add_object(ObjectNode node);
  void merge_detection(NodeId id, const DetectionObservation& det, int step);
  NodeId upsert_room(const RoomObservation& room);

  NodeId add_group(std::vector<NodeId> members);
  bool set_group_members(NodeId id, std::vector<NodeId> members);
  void remove_group(NodeId id);

  /// Returns false if the pair already carries an edge.
  bool add_relation(RelationEdge edge);
  bool remove_relation(NodeId a, NodeId b);

  /// Sets (or replaces) the room parent of a child. False when unchanged.
  bool set_affiliation(NodeId parent, NodeId child);
  bool clear_affiliation(NodeId child);

  const std::map<NodeId, ObjectNode>& objects() const { return objects_; }
  const std::map<NodeId, GroupNode>& groups() const { return groups_; }
  const std::map<NodeId, RoomNode>& rooms() const { return rooms_; }
  const std::map<RelationKey, RelationEdge>& relations() const { return relations_; }
  /// child -> room
  const std::map<NodeId, NodeId>& affiliations() const { return affiliations_; }
  std::vector<AffiliationEdge> affiliation_edges() const;

  bool has_object(NodeId id) const { return objects_.count(id) > 0; }
  /// Throws LookupError.
  const ObjectNode& object(NodeId id) const;
  const GroupNode& group(NodeId id) const;
  const RoomNode& room(NodeId id) const;

  std::optional<NodeId> group_of(NodeId object) const;
  std::optional<NodeId> room_of(NodeId child) const;
  std::optional<NodeId> room_by_truth(int truth_id) const;
  const RelationEdge* relation(NodeId a, NodeId b) const;
  std::vector<const RelationEdge*> relations_of(NodeId object) const;

  std::uint64_t revision() const { return revision_; }

  nlohmann::ordered_json snapshot() const;
  std::string export_text() const { return snapshot().dump(2); }

 private:
  void bump() { ++revision_; }
  static std::string group_label(const std::map<NodeId, ObjectNode>& objects,
                                 const std::vector<NodeId>& members);

  NodeId next_id_ = 1;
  std::uint64_t revision_ = 0;
  std::map<NodeId, ObjectNode> objects_;
  std::map<NodeId, GroupNode> groups_;
  std::map<NodeId, RoomNode> rooms_;
  std::map<RelationKey, RelationEdge> relations_;
  std::map<NodeId, NodeId> affiliations_;
  std::map<NodeId, NodeId> group_of_;
};

/// Merges each detection into the nearest same-category node within
/// merge_radius (each node absorbs at most one detection per call) or creates
/// a node. Returns ids in detection order. Throws MalformedObservation.
std::vector<NodeId> register_detections(SceneGraph& graph,
                                        std::span<const DetectionObservation> detections,
                                        int step,
                                        double merge_radius = kDefaultMergeRadius);

/// Returns ids of groups created by this call.
std::vector<NodeId> form_groups(SceneGraph& graph, const RelatedCategoryLexicon& lexicon);

/// Returns edges added or re-parented by this call.
std::vector<AffiliationEdge> assign_room_affiliations(SceneGraph& graph,
                                                      DiagnosticLog* log = nullptr);

struct EdgeProposal {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<RelationEdge> candidates;  // unverified; range not yet classified
  int prompts_issued = 0;
  int attempts = 0;
  int dropped = 0;
};

/// Pairs each new node with every earlier object node, then with the new
/// nodes after it: m*n + m(m-1)/2 pairs.
std::vector<std::pair<NodeId, NodeId>> proposal_pairs(const SceneGraph& graph,
                                                      std::span<const NodeId> new_ids);

/// One edge-proposal prompt per call (plus retries on malformed or
/// short responses).
EdgeProposal propose_edges_batched(const SceneGraph& graph, std::span<const NodeId> new_ids,
                                   LlmBackend& llm, int step = 0, int max_retries = 2,
                                   LlmTranscript* transcript = nullptr,
                                   DiagnosticLog* log = nullptr);

/// Per-frame record of which object nodes were detected together.
class CovisibilityLog {
 public:
  void record(int step, std::span<const NodeId> visible);
  bool knows(NodeId id) const { return frames_of_.count(id) > 0; }
  /// Earliest step where both were seen together. Throws LookupError for
  /// unknown ids.
  std::optional<int> covisible_step(NodeId a, NodeId b) const;
  bool covisible(NodeId a, NodeId b) const { return covisible_step(a, b).has_value(); }
  std::size_t frame_count() const { return frames_.size(); }
  std::span<const NodeId> frame(std::size_t index) const { return frames_[index].second; }
  int frame_step(std::size_t index) const { return frames_[index].first; }

 private:
  std::vector<std::pair<int, std::vector<NodeId>>> frames_;
  std::map<NodeId, std::vector<std::size_t>> frames_of_;
};

RangeClass classify_edge_range(const RelationEdge& edge, const CovisibilityLog& log);

enum class PruneDecision { kKeep, kDrop };

struct VlmQuery {
  int frame_step = 0;
  NodeId a = 0;
  NodeId b = 0;
  std::string category_a;
  std::string category_b;
  std::string relation;
  // Hidden ground truth ids for simulated oracles.
  int truth_a = -1;
  int truth_b = -1;
};

class VlmBackend {
 public:
  virtual ~VlmBackend() = default;
  /// True when the relation is visible in the frame. Throws
  /// ProviderUnavailable.
  virtual bool affirm(const VlmQuery& query) = 0;
};

/// Asks the VLM about the earliest shared frame. An unavailable VLM keeps the
/// edge and flags it.
PruneDecision prune_short_edge(RelationEdge& edge, const SceneGraph& graph,
                               const CovisibilityLog& log, VlmBackend& vlm,
                               DiagnosticLog* diag = nullptr);

/// Keeps a long edge only if both endpoints share a room and the segment
/// between them is unobstructed and within tolerance of parallel to the
/// room wall nearest its midpoint.
PruneDecision prune_long_edge(const RelationEdge& edge, const SceneGraph& graph,
                              const OccupancyGrid& grid,
                              double parallel_tolerance_deg = kDefaultParallelToleranceDeg);

struct Subgraph {
  NodeId central = 0;
  std::vector<NodeId> neighbors;  // sorted
  std::optional<NodeId> group;
  std::optional<NodeId> room;
  std::vector<RelationEdge> edges;  // incident to central
};

struct SubgraphOptions {
  bool include_groups = true;
  bool include_rooms = true;
  std::set<NodeId> hidden;  // objects left out entirely (blacklisted)
};

std::vector<Subgraph> decompose_subgraphs(const SceneGraph& graph,
                                          const SubgraphOptions& options = {});

SubgraphText to_text(const Subgraph& subgraph, const SceneGraph& graph);

enum class EdgeMode { kNone, kShort, kLong, kAll };

std::string_view to_string(EdgeMode m);
std::optional<EdgeMode> edge_mode_from_string(std::string_view s);

struct GraphBuildOptions {
  double merge_radius = kDefaultMergeRadius;
  bool use_groups = true;
  bool use_rooms = true;
  EdgeMode edges = EdgeMode::kAll;
  double parallel_tolerance_deg = kDefaultParallelToleranceDeg;
  int llm_retries = 2;
};

struct GraphUpdate {
  std::vector<NodeId> detection_ids;  // one per detection
  std::vector<NodeId> new_ids;
  int edges_proposed = 0;
  int edges_kept = 0;
  int prompts = 0;
};

/// Runs one perception step through the whole graph pipeline.
class SceneGraphBuilder {
 public:
  SceneGraphBuilder(GraphBuildOptions options, RelatedCategoryLexicon lexicon,
                    LlmBackend* llm, VlmBackend* vlm);

  GraphUpdate update(int step, std::span<const DetectionObservation> detections,
                     std::span<const RoomObservation> rooms, const OccupancyGrid& grid);

  const SceneGraph& graph() const { return graph_; }
  const CovisibilityLog& covisibility() const { return covis_; }
  const LlmTranscript& transcript() const { return transcript_; }
  const DiagnosticLog& diagnostics() const { return diag_; }
  const GraphBuildOptions& options() const { return options_; }

 private:
  GraphBuildOptions options_;
  RelatedCategoryLexicon lexicon_;
  LlmBackend* llm_;
  VlmBackend* vlm_;
  SceneGraph graph_;
  CovisibilityLog covis_;
  LlmTranscript transcript_;
  DiagnosticLog diag_;
};

}  // namespace sgnav

#endif  // SGNAV_SCENE_GRAPH_HPP_
