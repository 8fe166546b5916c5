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

#include "sgnav/scene_graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include "sgnav/structured.hpp"

namespace sgnav {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool contains_sorted(const std::vector<Cell>& cells, Cell c) {
  return std::binary_search(cells.begin(), cells.end(), c);
}

std::vector<Cell> sorted_unique(std::vector<Cell> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

void validate(const DetectionObservation& d) {
  if (d.footprint.empty()) {
    throw MalformedObservation("detection of '" + d.category + "' has an empty footprint");
  }
  if (d.category.empty()) throw MalformedObservation("detection without a category");
  if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
    throw MalformedObservation("detection confidence outside [0, 1]");
  }
}

}  // namespace

bool RoomNode::contains(Cell c) const {
  if (mask_.empty()) return contains_sorted(region, c);
  if (!bounds_.contains(c)) return false;
  return mask_[static_cast<std::size_t>(c.y - bounds_.y0) * bounds_.width() +
               static_cast<std::size_t>(c.x - bounds_.x0)] != 0;
}

void RoomNode::index() {
  bounds_ = CellBox{};
  mask_.clear();
  if (region.empty()) return;
  bounds_ = {region.front().x, region.front().y, region.front().x, region.front().y};
  for (Cell c : region) bounds_ = bounds_.united(c);
  mask_.assign(static_cast<std::size_t>(bounds_.width()) * bounds_.height(), 0);
  for (Cell c : region) {
    mask_[static_cast<std::size_t>(c.y - bounds_.y0) * bounds_.width() +
          static_cast<std::size_t>(c.x - bounds_.x0)] = 1;
  }
}

std::string_view to_string(RangeClass r) {
  return r == RangeClass::kShort ? "short" : "long";
}

// --- lexicon ---------------------------------------------------------------

RelatedCategoryLexicon RelatedCategoryLexicon::default_lexicon() {
  static const char* const kPairs[][2] = {
      {"Bed", "Nightstand"},
      {"Wardrobe", "Dresser"},
      {"Bookshelf", "Chair"},
      {"Counter", "Stove"},
      {"Table", "Chair"},
      {"Bathroom Sink", "Mirror"},
      {"Shower", "Bathtub"},
      {"Refrigerator", "Freezer"},
      {"Oven", "Microwave"},
      {"Washing Machine", "Dryer"},
      {"Sofa", "Table"},
      {"Desk", "Office Chair"},
      {"Computer", "Monitor"},
      {"Piano", "Bench"},
      {"Fireplace", "Mantel"},
      {"Table", "Mirror"},
      {"Window", "Curtains"},
      {"Closet", "Hangers"},
      {"Bathroom Cabinet", "Toiletries"},
      {"Living Room Rug", "Coffee Table"},
      {"Kitchen Cabinet", "Dishes"},
      {"Dining Room Chandelier", "Dining Table"},
      {"Clock", "Wall"},
      {"Floor Lamp", "Reading Chair"},
      {"Couch", "Throw Pillows"},
      {"Bookcase", "Books"},
  };
  RelatedCategoryLexicon lex;
  for (const auto& p : kPairs) lex.add(p[0], p[1]);
  return lex;
}

void RelatedCategoryLexicon::add(std::string_view a, std::string_view b) {
  std::string la = lower(a);
  std::string lb = lower(b);
  if (lb < la) std::swap(la, lb);
  pairs_.emplace(std::move(la), std::move(lb));
}

bool RelatedCategoryLexicon::related(std::string_view a, std::string_view b) const {
  std::string la = lower(a);
  std::string lb = lower(b);
  if (lb < la) std::swap(la, lb);
  return pairs_.count({la, lb}) > 0;
}

// --- graph store -----------------------------------------------------------

NodeId SceneGraph::add_object(ObjectNode node) {
  node.id = next_id_++;
  node.footprint = sorted_unique(std::move(node.footprint));
  const NodeId id = node.id;
  objects_.emplace(id, std::move(node));
  bump();
  return id;
}

void SceneGraph::merge_detection(NodeId id, const DetectionObservation& det, int step) {
  auto it = objects_.find(id);
  if (it == objects_.end()) throw LookupError("no object node " + std::to_string(id));
  ObjectNode& n = it->second;
  n.confidence = std::max(n.confidence, det.confidence);
  std::vector<Cell> merged;
  merged.reserve(n.footprint.size() + det.footprint.size());
  std::vector<Cell> incoming = sorted_unique(det.footprint);
  std::set_union(n.footprint.begin(), n.footprint.end(), incoming.begin(),
                 incoming.end(), std::back_inserter(merged));
  n.footprint = std::move(merged);
  // Running mean of detection centroids stays inside the union's bounding box.
  const double k = static_cast<double>(n.detections);
  n.centroid = {(n.centroid.x * k + det.centroid.x) / (k + 1),
                (n.centroid.y * k + det.centroid.y) / (k + 1),
                (n.centroid.z * k + det.centroid.z) / (k + 1)};
  n.detections += 1;
  n.last_seen = std::max(n.last_seen, step);
  bump();
}

NodeId SceneGraph::upsert_room(const RoomObservation& room) {
  if (room.truth_id >= 0) {
    if (auto existing = room_by_truth(room.truth_id)) {
      RoomNode& r = rooms_.at(*existing);
      std::vector<Cell> region = sorted_unique(room.region);
      if (region != r.region || r.room_type != room.room_type) {
        r.region = std::move(region);
        r.room_type = room.room_type;
        r.walls = room.walls;
        r.index();
        bump();
      }
      return *existing;
    }
  }
  RoomNode r;
  r.id = next_id_++;
  r.room_type = room.room_type;
  r.region = sorted_unique(room.region);
  r.walls = room.walls;
  r.truth_id = room.truth_id;
  r.index();
  const NodeId id = r.id;
  rooms_.emplace(id, std::move(r));
  bump();
  return id;
}

std::string SceneGraph::group_label(const std::map<NodeId, ObjectNode>& objects,
                                    const std::vector<NodeId>& members) {
  std::string label;
  for (NodeId m : members) {
    if (!label.empty()) label += '+';
    label += objects.at(m).category;
  }
  return label;
}

NodeId SceneGraph::add_group(std::vector<NodeId> members) {
  std::sort(members.begin(), members.end());
  if (members.size() < 2) throw InputError("a group needs at least two members");
  for (NodeId m : members) {
    if (!has_object(m)) throw LookupError("group member " + std::to_string(m) + " is not an object");
  }
  GroupNode g;
  g.id = next_id_++;
  g.members = members;
  g.label = group_label(objects_, members);
  for (NodeId m : members) group_of_[m] = g.id;
  const NodeId id = g.id;
  groups_.emplace(id, std::move(g));
  bump();
  return id;
}

bool SceneGraph::set_group_members(NodeId id, std::vector<NodeId> members) {
  auto it = groups_.find(id);
  if (it == groups_.end()) throw LookupError("no group node " + std::to_string(id));
  std::sort(members.begin(), members.end());
  if (members == it->second.members) return false;
  for (NodeId m : it->second.members) group_of_.erase(m);
  it->second.members = members;
  it->second.label = group_label(objects_, members);
  for (NodeId m : members) group_of_[m] = id;
  bump();
  return true;
}

void SceneGraph::remove_group(NodeId id) {
  auto it = groups_.find(id);
  if (it == groups_.end()) return;
  for (NodeId m : it->second.members) {
    auto g = group_of_.find(m);
    if (g != group_of_.end() && g->second == id) group_of_.erase(g);
  }
  groups_.erase(it);
  affiliations_.erase(id);
  bump();
}

bool SceneGraph::add_relation(RelationEdge edge) {
  if (edge.a == edge.b) throw InputError("relation edge endpoints must differ");
  if (!has_object(edge.a) || !has_object(edge.b)) {
    throw LookupError("relation edge endpoint is not an object node");
  }
  const RelationKey k = key(edge.a, edge.b);
  if (relations_.count(k)) return false;
  relations_.emplace(k, std::move(edge));
  bump();
  return true;
}

bool SceneGraph::remove_relation(NodeId a, NodeId b) {
  if (relations_.erase(key(a, b)) == 0) return false;
  bump();
  return true;
}

bool SceneGraph::set_affiliation(NodeId parent, NodeId child) {
  if (!rooms_.count(parent)) throw LookupError("affiliation parent is not a room");
  if (!objects_.count(child) && !groups_.count(child)) {
    throw LookupError("affiliation child is not an object or group");
  }
  auto it = affiliations_.find(child);
  if (it != affiliations_.end() && it->second == parent) return false;
  affiliations_[child] = parent;
  bump();
  return true;
}

bool SceneGraph::clear_affiliation(NodeId child) {
  if (affiliations_.erase(child) == 0) return false;
  bump();
  return true;
}

std::vector<AffiliationEdge> SceneGraph::affiliation_edges() const {
  std::vector<AffiliationEdge> out;
  for (const auto& [child, parent] : affiliations_) out.push_back({parent, child});
  return out;
}

const ObjectNode& SceneGraph::object(NodeId id) const {
  auto it = objects_.find(id);
  if (it == objects_.end()) throw LookupError("no object node " + std::to_string(id));
  return it->second;
}

const GroupNode& SceneGraph::group(NodeId id) const {
  auto it = groups_.find(id);
  if (it == groups_.end()) throw LookupError("no group node " + std::to_string(id));
  return it->second;
}

const RoomNode& SceneGraph::room(NodeId id) const {
  auto it = rooms_.find(id);
  if (it == rooms_.end()) throw LookupError("no room node " + std::to_string(id));
  return it->second;
}

std::optional<NodeId> SceneGraph::group_of(NodeId object) const {
  auto it = group_of_.find(object);
  if (it == group_of_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> SceneGraph::room_of(NodeId child) const {
  auto it = affiliations_.find(child);
  if (it == affiliations_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> SceneGraph::room_by_truth(int truth_id) const {
  for (const auto& [id, r] : rooms_) {
    if (r.truth_id == truth_id) return id;
  }
  return std::nullopt;
}

const RelationEdge* SceneGraph::relation(NodeId a, NodeId b) const {
  auto it = relations_.find(key(a, b));
  return it == relations_.end() ? nullptr : &it->second;
}

std::vector<const RelationEdge*> SceneGraph::relations_of(NodeId object) const {
  std::vector<const RelationEdge*> out;
  for (const auto& [k, e] : relations_) {
    if (k.first == object || k.second == object) out.push_back(&e);
  }
  return out;
}

nlohmann::ordered_json SceneGraph::snapshot() const {
  using ojson = nlohmann::ordered_json;
  ojson j;
  j["revision"] = revision_;
  ojson objs = ojson::array();
  for (const auto& [id, o] : objects_) {
    ojson n;
    n["id"] = id;
    n["category"] = o.category;
    n["confidence"] = o.confidence;
    n["centroid"] = {o.centroid.x, o.centroid.y, o.centroid.z};
    n["footprint_cells"] = o.footprint.size();
    n["first_seen"] = o.first_seen;
    n["last_seen"] = o.last_seen;
    objs.push_back(std::move(n));
  }
  j["objects"] = std::move(objs);
  ojson groups = ojson::array();
  for (const auto& [id, g] : groups_) {
    groups.push_back({{"id", id}, {"label", g.label}, {"members", g.members}});
  }
  j["groups"] = std::move(groups);
  ojson rooms = ojson::array();
  for (const auto& [id, r] : rooms_) {
    rooms.push_back({{"id", id},
                     {"room_type", r.room_type},
                     {"region_cells", r.region.size()},
                     {"walls", r.walls.size()}});
  }
  j["rooms"] = std::move(rooms);
  ojson rels = ojson::array();
  for (const auto& [k, e] : relations_) {
    ojson r;
    r["a"] = e.a;
    r["b"] = e.b;
    r["relation"] = e.relation;
    r["range"] = std::string(to_string(e.range_class));
    r["verified"] = e.verified;
    if (e.flagged) r["flagged"] = true;
    rels.push_back(std::move(r));
  }
  j["relations"] = std::move(rels);
  ojson affs = ojson::array();
  for (const auto& [child, parent] : affiliations_) {
    affs.push_back({{"parent", parent}, {"child", child}});
  }
  j["affiliations"] = std::move(affs);
  return j;
}

// --- operations ------------------------------------------------------------

std::vector<NodeId> register_detections(SceneGraph& graph,
                                        std::span<const DetectionObservation> detections,
                                        int step, double merge_radius) {
  for (const auto& d : detections) validate(d);
  std::vector<NodeId> ids;
  ids.reserve(detections.size());
  std::set<NodeId> claimed;
  for (const auto& d : detections) {
    std::optional<NodeId> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& [id, node] : graph.objects()) {
      if (node.category != d.category || claimed.count(id)) continue;
      const double dist = distance(node.centroid.xy(), d.centroid.xy());
      if (dist <= merge_radius && dist < best_dist) {
        best = id;
        best_dist = dist;
      }
    }
    if (best) {
      graph.merge_detection(*best, d, step);
      claimed.insert(*best);
      ids.push_back(*best);
      continue;
    }
    ObjectNode n;
    n.category = d.category;
    n.confidence = d.confidence;
    n.centroid = d.centroid;
    n.footprint = d.footprint;
    n.first_seen = step;
    n.last_seen = step;
    n.detections = 1;
    n.truth_id = d.truth_id;
    const NodeId id = graph.add_object(std::move(n));
    claimed.insert(id);
    ids.push_back(id);
  }
  return ids;
}

std::vector<NodeId> form_groups(SceneGraph& graph, const RelatedCategoryLexicon& lexicon) {
  // Union-find over objects joined by lexicon-related edges; the components
  // are the fixed point of repeatedly pulling related neighbours into groups.
  std::map<NodeId, NodeId> parent;
  auto find = [&](NodeId x) {
    while (parent.at(x) != x) {
      parent[x] = parent.at(parent.at(x));
      x = parent.at(x);
    }
    return x;
  };
  for (const auto& [k, e] : graph.relations()) {
    const auto& a = graph.object(e.a);
    const auto& b = graph.object(e.b);
    if (!lexicon.related(a.category, b.category)) continue;
    parent.try_emplace(e.a, e.a);
    parent.try_emplace(e.b, e.b);
    const NodeId ra = find(e.a);
    const NodeId rb = find(e.b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  // Existing group members stay grouped even if a later edge set differs.
  for (const auto& [gid, g] : graph.groups()) {
    for (NodeId m : g.members) parent.try_emplace(m, m);
    for (std::size_t i = 1; i < g.members.size(); ++i) {
      const NodeId ra = find(g.members[0]);
      const NodeId rb = find(g.members[i]);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }

  std::map<NodeId, std::vector<NodeId>> components;
  for (const auto& [id, p] : parent) components[find(id)].push_back(id);

  std::vector<NodeId> created;
  for (auto& [root, members] : components) {
    if (members.size() < 2) continue;
    std::set<NodeId> existing;
    for (NodeId m : members) {
      if (auto g = graph.group_of(m)) existing.insert(*g);
    }
    if (existing.empty()) {
      created.push_back(graph.add_group(members));
      continue;
    }
    const NodeId keep = *existing.begin();
    for (NodeId g : existing) {
      if (g != keep) graph.remove_group(g);
    }
    graph.set_group_members(keep, members);
  }
  return created;
}

std::vector<AffiliationEdge> assign_room_affiliations(SceneGraph& graph, DiagnosticLog* log) {
  std::vector<AffiliationEdge> added;
  const auto& rooms = graph.rooms();
  for (const auto& [oid, obj] : graph.objects()) {
    std::optional<NodeId> host;
    int touching = 0;
    for (const auto& [rid, room] : rooms) {
      const auto inside = std::count_if(obj.footprint.begin(), obj.footprint.end(),
                                        [&](Cell c) { return room.contains(c); });
      if (inside == 0) continue;
      ++touching;
      if (static_cast<std::size_t>(inside) == obj.footprint.size()) host = rid;
    }
    if (host) {
      if (graph.set_affiliation(*host, oid)) added.push_back({*host, oid});
    } else {
      if (graph.room_of(oid)) graph.clear_affiliation(oid);
      if (touching >= 2 && log) {
        log->log("object " + std::to_string(oid) + " (" + obj.category +
                 ") straddles rooms; no affiliation");
      }
    }
  }
  for (const auto& [gid, g] : graph.groups()) {
    std::optional<NodeId> common = graph.room_of(g.members.front());
    for (NodeId m : g.members) {
      if (graph.room_of(m) != common) common.reset();
    }
    if (common) {
      if (graph.set_affiliation(*common, gid)) added.push_back({*common, gid});
    } else if (graph.room_of(gid)) {
      graph.clear_affiliation(gid);
    }
  }
  return added;
}

std::vector<std::pair<NodeId, NodeId>> proposal_pairs(const SceneGraph& graph,
                                                      std::span<const NodeId> new_ids) {
  std::vector<NodeId> fresh;
  for (NodeId id : new_ids) {
    if (std::find(fresh.begin(), fresh.end(), id) == fresh.end()) fresh.push_back(id);
  }
  const std::set<NodeId> fresh_set(fresh.begin(), fresh.end());
  std::vector<NodeId> previous;
  for (const auto& [id, o] : graph.objects()) {
    if (!fresh_set.count(id)) previous.push_back(id);
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId a : fresh) {
    for (NodeId b : previous) pairs.emplace_back(a, b);
  }
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    for (std::size_t j = i + 1; j < fresh.size(); ++j) pairs.emplace_back(fresh[i], fresh[j]);
  }
  return pairs;
}

EdgeProposal propose_edges_batched(const SceneGraph& graph, std::span<const NodeId> new_ids,
                                   LlmBackend& llm, int step, int max_retries,
                                   LlmTranscript* transcript, DiagnosticLog* log) {
  EdgeProposal out;
  out.pairs = proposal_pairs(graph, new_ids);
  if (out.pairs.empty()) return out;

  std::vector<CategoryPair> cats;
  cats.reserve(out.pairs.size());
  for (const auto& [a, b] : out.pairs) {
    cats.emplace_back(graph.object(a).category, graph.object(b).category);
  }
  CompletionRequest req;
  req.prompt = edge_proposal_prompt(cats);
  req.request_id = "edges@" + std::to_string(step);

  RelationList best;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    TranscriptRecord rec;
    rec.stage = Stage::kEdgeProposal;
    rec.prompt = req.prompt;
    rec.attempt = attempt;
    ++out.attempts;
    if (attempt == 0) out.prompts_issued = 1;
    bool done = false;
    try {
      rec.response = llm.complete(req);
      RelationList rels = parse_relations(rec.response);
      rec.parsed = true;
      if (rels.size() == out.pairs.size()) {
        best = std::move(rels);
        done = true;
      } else {
        rec.error = "expected " + std::to_string(out.pairs.size()) + " relations, got " +
                    std::to_string(rels.size());
        if (rels.size() > best.size()) best = std::move(rels);
      }
    } catch (const Error& e) {
      rec.error = e.what();
    }
    if (transcript) transcript->records.push_back(std::move(rec));
    if (done) break;
  }

  const std::size_t usable = std::min(best.size(), out.pairs.size());
  out.dropped = static_cast<int>(out.pairs.size() - usable);
  if (out.dropped > 0 && log) {
    log->log("edge proposal at step " + std::to_string(step) + ": dropped " +
             std::to_string(out.dropped) + " of " + std::to_string(out.pairs.size()) +
             " pairs");
  }
  for (std::size_t i = 0; i < usable; ++i) {
    RelationEdge e;
    e.a = out.pairs[i].first;
    e.b = out.pairs[i].second;
    e.relation = normalize_relation(best[i]);
    e.proposed_at = step;
    out.candidates.push_back(std::move(e));
  }
  return out;
}

void CovisibilityLog::record(int step, std::span<const NodeId> visible) {
  std::vector<NodeId> ids(visible.begin(), visible.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const std::size_t index = frames_.size();
  for (NodeId id : ids) frames_of_[id].push_back(index);
  frames_.emplace_back(step, std::move(ids));
}

std::optional<int> CovisibilityLog::covisible_step(NodeId a, NodeId b) const {
  auto ia = frames_of_.find(a);
  auto ib = frames_of_.find(b);
  if (ia == frames_of_.end() || ib == frames_of_.end()) {
    throw LookupError("node " + std::to_string(ia == frames_of_.end() ? a : b) +
                      " never appears in the covisibility log");
  }
  std::vector<std::size_t> common;
  std::set_intersection(ia->second.begin(), ia->second.end(), ib->second.begin(),
                        ib->second.end(), std::back_inserter(common));
  if (common.empty()) return std::nullopt;
  return frames_[common.front()].first;
}

RangeClass classify_edge_range(const RelationEdge& edge, const CovisibilityLog& log) {
  return log.covisible(edge.a, edge.b) ? RangeClass::kShort : RangeClass::kLong;
}

PruneDecision prune_short_edge(RelationEdge& edge, const SceneGraph& graph,
                               const CovisibilityLog& log, VlmBackend& vlm,
                               DiagnosticLog* diag) {
  const auto frame = log.covisible_step(edge.a, edge.b);
  if (!frame) throw InputError("short edge without a shared frame");
  const ObjectNode& a = graph.object(edge.a);
  const ObjectNode& b = graph.object(edge.b);
  VlmQuery q{*frame, edge.a, edge.b, a.category, b.category, edge.relation,
             a.truth_id, b.truth_id};
  try {
    const bool yes = vlm.affirm(q);
    edge.verified = yes;
    return yes ? PruneDecision::kKeep : PruneDecision::kDrop;
  } catch (const ProviderUnavailable& e) {
    edge.verified = false;
    edge.flagged = true;
    if (diag) {
      diag->log("VLM unavailable, keeping unverified edge " + a.category + " " +
                edge.relation + " " + b.category + ": " + e.what());
    }
    return PruneDecision::kKeep;
  }
}

PruneDecision prune_long_edge(const RelationEdge& edge, const SceneGraph& graph,
                              const OccupancyGrid& grid, double parallel_tolerance_deg) {
  const auto ra = graph.room_of(edge.a);
  const auto rb = graph.room_of(edge.b);
  if (!ra || !rb || *ra != *rb) return PruneDecision::kDrop;

  const ObjectNode& a = graph.object(edge.a);
  const ObjectNode& b = graph.object(edge.b);
  for (Cell c : line_cells(grid.to_cell(a.centroid.xy()), grid.to_cell(b.centroid.xy()))) {
    if (contains_sorted(a.footprint, c) || contains_sorted(b.footprint, c)) continue;
    if (grid.is_occupied(c)) return PruneDecision::kDrop;
  }

  const RoomNode& room = graph.room(*ra);
  if (room.walls.empty()) return PruneDecision::kDrop;
  const Segment link{a.centroid.xy(), b.centroid.xy()};
  const Vec2 mid = link.midpoint();
  const Segment* nearest = &room.walls.front();
  double best = point_segment_distance(mid, *nearest);
  for (const Segment& w : room.walls) {
    const double d = point_segment_distance(mid, w);
    if (d < best) {
      best = d;
      nearest = &w;
    }
  }
  const double angle =
      line_angle_between_deg(link.orientation_deg(), nearest->orientation_deg());
  return angle <= parallel_tolerance_deg ? PruneDecision::kKeep : PruneDecision::kDrop;
}

std::vector<Subgraph> decompose_subgraphs(const SceneGraph& graph,
                                          const SubgraphOptions& options) {
  std::vector<Subgraph> out;
  for (const auto& [id, obj] : graph.objects()) {
    if (options.hidden.count(id)) continue;
    Subgraph s;
    s.central = id;
    for (const RelationEdge* e : graph.relations_of(id)) {
      const NodeId other = e->a == id ? e->b : e->a;
      if (options.hidden.count(other)) continue;
      s.neighbors.push_back(other);
      s.edges.push_back(*e);
    }
    std::sort(s.neighbors.begin(), s.neighbors.end());
    if (options.include_groups) s.group = graph.group_of(id);
    if (options.include_rooms) s.room = graph.room_of(id);
    out.push_back(std::move(s));
  }
  return out;
}

SubgraphText to_text(const Subgraph& subgraph, const SceneGraph& graph) {
  SubgraphText t;
  t.nodes.push_back(graph.object(subgraph.central).category);
  for (NodeId n : subgraph.neighbors) t.nodes.push_back(graph.object(n).category);
  if (subgraph.group) t.nodes.push_back(graph.group(*subgraph.group).label);
  if (subgraph.room) t.nodes.push_back(graph.room(*subgraph.room).room_type);
  for (const RelationEdge& e : subgraph.edges) {
    t.edges.push_back(graph.object(e.a).category + " " + e.relation + " " +
                      graph.object(e.b).category);
  }
  return t;
}

std::string_view to_string(EdgeMode m) {
  switch (m) {
    case EdgeMode::kNone: return "none";
    case EdgeMode::kShort: return "short";
    case EdgeMode::kLong: return "long";
    case EdgeMode::kAll: return "all";
  }
  return "all";
}

std::optional<EdgeMode> edge_mode_from_string(std::string_view s) {
  if (s == "none") return EdgeMode::kNone;
  if (s == "short") return EdgeMode::kShort;
  if (s == "long") return EdgeMode::kLong;
  if (s == "all") return EdgeMode::kAll;
  return std::nullopt;
}

// --- builder ---------------------------------------------------------------

SceneGraphBuilder::SceneGraphBuilder(GraphBuildOptions options, RelatedCategoryLexicon lexicon,
                                     LlmBackend* llm, VlmBackend* vlm)
    : options_(options), lexicon_(std::move(lexicon)), llm_(llm), vlm_(vlm) {}

GraphUpdate SceneGraphBuilder::update(int step,
                                      std::span<const DetectionObservation> detections,
                                      std::span<const RoomObservation> rooms,
                                      const OccupancyGrid& grid) {
  GraphUpdate u;
  if (options_.use_rooms) {
    for (const RoomObservation& r : rooms) graph_.upsert_room(r);
  }
  const std::set<NodeId> before = [&] {
    std::set<NodeId> s;
    for (const auto& [id, o] : graph_.objects()) s.insert(id);
    return s;
  }();
  u.detection_ids = register_detections(graph_, detections, step, options_.merge_radius);
  for (NodeId id : u.detection_ids) {
    if (!before.count(id) &&
        std::find(u.new_ids.begin(), u.new_ids.end(), id) == u.new_ids.end()) {
      u.new_ids.push_back(id);
    }
  }
  covis_.record(step, u.detection_ids);
  if (options_.use_rooms) assign_room_affiliations(graph_, &diag_);

  if (options_.edges != EdgeMode::kNone && llm_ != nullptr && !u.new_ids.empty()) {
    EdgeProposal p;
    try {
      p = propose_edges_batched(graph_, u.new_ids, *llm_, step, options_.llm_retries,
                                &transcript_, &diag_);
    } catch (const Error& e) {
      diag_.log(std::string("edge proposal failed: ") + e.what());
    }
    u.prompts = p.prompts_issued;
    u.edges_proposed = static_cast<int>(p.candidates.size());
    for (RelationEdge& e : p.candidates) {
      e.range_class = classify_edge_range(e, covis_);
      const bool is_short = e.range_class == RangeClass::kShort;
      if (options_.edges == EdgeMode::kShort && !is_short) continue;
      if (options_.edges == EdgeMode::kLong && is_short) continue;
      PruneDecision d = PruneDecision::kDrop;
      if (is_short) {
        if (vlm_ != nullptr) {
          d = prune_short_edge(e, graph_, covis_, *vlm_, &diag_);
        } else {
          e.flagged = true;
          d = PruneDecision::kKeep;
        }
      } else {
        d = prune_long_edge(e, graph_, grid, options_.parallel_tolerance_deg);
        e.verified = d == PruneDecision::kKeep;
      }
      if (d == PruneDecision::kKeep && graph_.add_relation(e)) ++u.edges_kept;
    }
  }
  if (options_.use_groups) form_groups(graph_, lexicon_);
  if (options_.use_rooms) assign_room_affiliations(graph_, &diag_);
  return u;
}

}  // namespace sgnav
