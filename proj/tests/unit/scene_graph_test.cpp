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

#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "sgnav/errors.hpp"
#include "sgnav/structured.hpp"
#include "test_util.hpp"

namespace {

using namespace sgnav;
using sgnav::testing::grid_from_rows;

DetectionObservation det(std::string cat, double x, double y, std::vector<Cell> fp,
                         double conf = 0.9) {
  DetectionObservation d;
  d.category = std::move(cat);
  d.confidence = conf;
  d.centroid = {x, y, 0.5};
  d.footprint = std::move(fp);
  return d;
}

DetectionObservation det(std::string cat, double x, double y) {
  return det(std::move(cat), x, y, {{static_cast<int>(x * 20), static_cast<int>(y * 20)}});
}

RoomObservation room(int truth, std::string type, CellBox box, std::vector<Segment> walls = {}) {
  RoomObservation r;
  r.truth_id = truth;
  r.room_type = std::move(type);
  for (int y = box.y0; y <= box.y1; ++y) {
    for (int x = box.x0; x <= box.x1; ++x) r.region.push_back({x, y});
  }
  r.walls = std::move(walls);
  return r;
}

class LambdaVlm : public VlmBackend {
 public:
  explicit LambdaVlm(std::function<bool(const VlmQuery&)> fn) : fn_(std::move(fn)) {}
  bool affirm(const VlmQuery& q) override {
    ++calls;
    last = q;
    return fn_(q);
  }
  int calls = 0;
  VlmQuery last;

 private:
  std::function<bool(const VlmQuery&)> fn_;
};

// Answers every edge prompt with `relation` once per pair in the slot.
FunctionBackend relation_llm(std::string relation, int* calls = nullptr) {
  return FunctionBackend("rel", [relation, calls](const CompletionRequest& r) {
    if (calls) ++*calls;
    std::size_t n = 0;
    for (std::size_t p = r.prompt.rfind(kEdgeMarker); (p = r.prompt.find("\"object1\"", p)) !=
                                                       std::string::npos;
         ++p) {
      ++n;
    }
    return render(RelationList(n, relation));
  });
}

TEST(RegisterDetectionsTest, FirstDetectionCreatesNode) {
  SceneGraph g;
  const auto d = det("chair", 1, 1);
  const auto ids = register_detections(g, std::span(&d, 1), 0);
  ASSERT_EQ(ids.size(), 1u);
  EXPECT_EQ(g.objects().size(), 1u);
  EXPECT_EQ(g.object(ids[0]).category, "chair");
}

TEST(RegisterDetectionsTest, MergesWithinRadiusAcrossSteps) {
  SceneGraph g;
  const auto a = det("chair", 1.0, 1.0, {{20, 20}, {21, 20}}, 0.6);
  const auto b = det("chair", 1.2, 1.0, {{21, 20}, {24, 20}}, 0.9);
  const NodeId first = register_detections(g, std::span(&a, 1), 3)[0];
  const NodeId second = register_detections(g, std::span(&b, 1), 7)[0];
  EXPECT_EQ(first, second);
  const ObjectNode& n = g.object(first);
  EXPECT_EQ(n.footprint, (std::vector<Cell>{{20, 20}, {21, 20}, {24, 20}}));
  EXPECT_DOUBLE_EQ(n.confidence, 0.9);
  EXPECT_EQ(n.first_seen, 3);
  EXPECT_EQ(n.last_seen, 7);
  EXPECT_NEAR(n.centroid.x, 1.1, 1e-12);
}

TEST(RegisterDetectionsTest, CategoryGateAndRadius) {
  SceneGraph g;
  const std::vector<DetectionObservation> ds{det("chair", 1, 1), det("table", 1, 1),
                                             det("chair", 1.6, 1)};
  const auto ids = register_detections(g, ds, 0);
  EXPECT_EQ(g.objects().size(), 3u);
  EXPECT_NE(ids[0], ids[1]);
  EXPECT_NE(ids[0], ids[2]);
}

TEST(RegisterDetectionsTest, OneMergePerNodePerFrame) {
  SceneGraph g;
  const auto seed = det("chair", 1, 1);
  register_detections(g, std::span(&seed, 1), 0);
  const std::vector<DetectionObservation> two{det("chair", 1.1, 1), det("chair", 0.9, 1)};
  const auto ids = register_detections(g, two, 1);
  EXPECT_NE(ids[0], ids[1]);
  EXPECT_EQ(g.objects().size(), 2u);
}

TEST(RegisterDetectionsTest, RejectsMalformed) {
  SceneGraph g;
  const auto empty = det("chair", 1, 1, {});
  EXPECT_THROW(register_detections(g, std::span(&empty, 1), 0), MalformedObservation);
  const auto bad_conf = det("chair", 1, 1, {{0, 0}}, 1.5);
  EXPECT_THROW(register_detections(g, std::span(&bad_conf, 1), 0), MalformedObservation);
  EXPECT_TRUE(g.objects().empty());
}

TEST(LexiconTest, DefaultPairsAndSymmetry) {
  const auto lex = RelatedCategoryLexicon::default_lexicon();
  EXPECT_EQ(lex.size(), 26u);
  EXPECT_TRUE(lex.related("table", "chair"));
  EXPECT_TRUE(lex.related("Chair", "TABLE"));
  EXPECT_TRUE(lex.related("office chair", "desk"));
  EXPECT_FALSE(lex.related("chair", "chair"));
  EXPECT_FALSE(lex.related("toilet", "bed"));
}

TEST(FormGroupsTest, RelatedEdgeMakesGroup) {
  SceneGraph g;
  const std::vector<DetectionObservation> ds{det("table", 1, 1), det("chair", 2, 1),
                                             det("chair", 3, 1)};
  const auto ids = register_detections(g, ds, 0);
  const auto lex = RelatedCategoryLexicon::default_lexicon();
  EXPECT_TRUE(form_groups(g, lex).empty());  // no edges yet

  g.add_relation({ids[0], ids[1], "next to"});
  const auto created = form_groups(g, lex);
  ASSERT_EQ(created.size(), 1u);
  EXPECT_EQ(g.group(created[0]).members, (std::vector<NodeId>{ids[0], ids[1]}));
  EXPECT_EQ(g.group(created[0]).label, "table+chair");

  // Chair-chair is not in the lexicon; the group stays as it was.
  g.add_relation({ids[1], ids[2], "next to"});
  const auto rev = g.revision();
  EXPECT_TRUE(form_groups(g, lex).empty());
  EXPECT_EQ(g.groups().size(), 1u);
  EXPECT_EQ(g.group(created[0]).members.size(), 2u);
  EXPECT_EQ(g.revision(), rev);
}

TEST(FormGroupsTest, GrowsTransitivelyIntoExistingGroup) {
  SceneGraph g;
  const std::vector<DetectionObservation> ds{det("table", 1, 1), det("chair", 2, 1),
                                             det("sofa", 3, 1), det("mirror", 4, 1)};
  const auto ids = register_detections(g, ds, 0);
  const auto lex = RelatedCategoryLexicon::default_lexicon();
  g.add_relation({ids[0], ids[1], "next to"});
  const NodeId gid = form_groups(g, lex).at(0);
  g.add_relation({ids[2], ids[0], "next to"});
  g.add_relation({ids[3], ids[0], "above"});
  EXPECT_TRUE(form_groups(g, lex).empty());
  EXPECT_EQ(g.groups().size(), 1u);
  EXPECT_EQ(g.group(gid).members.size(), 4u);
  EXPECT_TRUE(form_groups(g, lex).empty());
}

TEST(AffiliationTest, ContainmentAndGroups) {
  SceneGraph g;
  const NodeId kitchen = g.upsert_room(room(0, "kitchen", {0, 0, 9, 9}));
  const NodeId living = g.upsert_room(room(1, "living room", {10, 0, 19, 9}));
  const std::vector<DetectionObservation> ds{
      det("chair", 0.1, 0.1, {{2, 2}, {3, 2}}), det("table", 0.7, 0.1, {{14, 2}}),
      det("sofa", 0.5, 0.1, {{9, 5}, {10, 5}})};
  const auto ids = register_detections(g, ds, 0);
  DiagnosticLog log;
  const auto added = assign_room_affiliations(g, &log);
  EXPECT_EQ(added.size(), 2u);
  EXPECT_EQ(g.room_of(ids[0]), kitchen);
  EXPECT_EQ(g.room_of(ids[1]), living);
  EXPECT_FALSE(g.room_of(ids[2]).has_value());
  ASSERT_EQ(log.messages.size(), 1u);
  EXPECT_NE(log.messages[0].find("straddles"), std::string::npos);

  // A group split across rooms has no room parent.
  const NodeId gid = g.add_group({ids[0], ids[1]});
  assign_room_affiliations(g);
  EXPECT_FALSE(g.room_of(gid).has_value());
  EXPECT_TRUE(assign_room_affiliations(g).empty());
}

TEST(AffiliationTest, GroupInOneRoom) {
  SceneGraph g;
  const NodeId bedroom = g.upsert_room(room(0, "bedroom", {0, 0, 19, 19}));
  const std::vector<DetectionObservation> ds{det("bed", 0.2, 0.2), det("nightstand", 0.5, 0.2)};
  const auto ids = register_detections(g, ds, 0);
  const NodeId gid = g.add_group({ids[0], ids[1]});
  assign_room_affiliations(g);
  EXPECT_EQ(g.room_of(gid), bedroom);
  const auto rev = g.revision();
  EXPECT_TRUE(assign_room_affiliations(g).empty());
  EXPECT_EQ(g.revision(), rev);
}

TEST(AffiliationTest, NoRoomsNoEdges) {
  SceneGraph g;
  const auto d = det("chair", 1, 1);
  register_detections(g, std::span(&d, 1), 0);
  EXPECT_TRUE(assign_room_affiliations(g).empty());
}

TEST(RoomTest, UpsertByTruthId) {
  SceneGraph g;
  const NodeId a = g.upsert_room(room(4, "kitchen", {0, 0, 3, 3}));
  const auto rev = g.revision();
  EXPECT_EQ(g.upsert_room(room(4, "kitchen", {0, 0, 3, 3})), a);
  EXPECT_EQ(g.revision(), rev);
  EXPECT_EQ(g.upsert_room(room(4, "kitchen", {0, 0, 5, 3})), a);
  EXPECT_GT(g.revision(), rev);
  EXPECT_TRUE(g.room(a).contains({5, 3}));
  EXPECT_FALSE(g.room(a).contains({6, 3}));
}

TEST(EdgeProposalTest, PairEnumeration) {
  SceneGraph g;
  const auto tv = det("TV", 1, 1);
  register_detections(g, std::span(&tv, 1), 0);
  const std::vector<DetectionObservation> fresh{det("sofa", 3, 1), det("plant", 5, 1)};
  const auto ids = register_detections(g, fresh, 1);
  const auto pairs = proposal_pairs(g, ids);
  ASSERT_EQ(pairs.size(), 3u);
  auto cat = [&](NodeId id) { return g.object(id).category; };
  EXPECT_EQ(std::make_pair(cat(pairs[0].first), cat(pairs[0].second)),
            std::make_pair(std::string("sofa"), std::string("TV")));
  EXPECT_EQ(std::make_pair(cat(pairs[1].first), cat(pairs[1].second)),
            std::make_pair(std::string("plant"), std::string("TV")));
  EXPECT_EQ(std::make_pair(cat(pairs[2].first), cat(pairs[2].second)),
            std::make_pair(std::string("sofa"), std::string("plant")));
}

TEST(EdgeProposalTest, PairCountFormula) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(rng() % 30);
    const int m = static_cast<int>(rng() % 8);
    SceneGraph g;
    for (int i = 0; i < n; ++i) g.add_object({0, "old", 0.5, {double(i), 0, 0}, {{i, 0}}});
    std::vector<NodeId> fresh;
    for (int i = 0; i < m; ++i) {
      fresh.push_back(g.add_object({0, "new", 0.5, {double(i), 5, 0}, {{i, 100}}}));
    }
    const auto pairs = proposal_pairs(g, fresh);
    EXPECT_EQ(static_cast<int>(pairs.size()), m * n + m * (m - 1) / 2);
    EXPECT_LE(static_cast<int>(pairs.size()), m * (m + n));
  }
}

TEST(EdgeProposalTest, OnePromptWithSlot) {
  SceneGraph g;
  g.add_object({0, "chair", 0.9, {1, 1, 0}, {{1, 1}}});
  const NodeId table = g.add_object({0, "table", 0.9, {2, 1, 0}, {{2, 1}}});
  int calls = 0;
  FunctionBackend llm("fixture", [&](const CompletionRequest& r) {
    ++calls;
    EXPECT_NE(r.prompt.find(std::string(kEdgeMarker) +
                            R"([{"object1": "table", "object2": "chair"}])"),
              std::string::npos);
    return std::string(R"([{"relationships": "next to"}])");
  });
  LlmTranscript t;
  const auto p = propose_edges_batched(g, std::span(&table, 1), llm, 1, 2, &t);
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(p.prompts_issued, 1);
  ASSERT_EQ(p.candidates.size(), 1u);
  EXPECT_EQ(p.candidates[0].relation, "next to");
  EXPECT_EQ(t.records.size(), 1u);
}

TEST(EdgeProposalTest, LiteralExampleMapsInOrder) {
  SceneGraph g;
  const NodeId table = g.add_object({0, "table", 0.9, {1, 1, 0}, {{1, 1}}});
  const NodeId desk = g.add_object({0, "desk", 0.9, {3, 1, 0}, {{3, 1}}});
  const NodeId chair = g.add_object({0, "chair", 0.9, {1.5, 1, 0}, {{4, 1}}});
  const NodeId monitor = g.add_object({0, "monitor", 0.9, {3, 1, 0}, {{5, 1}}});
  // Pairs are (chair,table), (chair,desk), (monitor,table), (monitor,desk), (chair,monitor).
  ScriptedBackend llm({{std::string(kEdgeMarker),
                        R"([{"relationships": "next to"}, {"relationships": "near"}, )"
                        R"({"relationships": "near"}, {"relationships": "above"}, )"
                        R"({"relationships": "near"}])"}});
  const NodeId fresh[] = {chair, monitor};
  const auto p = propose_edges_batched(g, fresh, llm);
  ASSERT_EQ(p.candidates.size(), 5u);
  EXPECT_EQ(p.candidates[0].a, chair);
  EXPECT_EQ(p.candidates[0].b, table);
  EXPECT_EQ(p.candidates[0].relation, "next to");
  EXPECT_EQ(p.candidates[3].a, monitor);
  EXPECT_EQ(p.candidates[3].b, desk);
  EXPECT_EQ(p.candidates[3].relation, "above");
}

TEST(EdgeProposalTest, RetriesThenDrops) {
  SceneGraph g;
  g.add_object({0, "sofa", 0.9, {1, 1, 0}, {{1, 1}}});
  g.add_object({0, "tv", 0.9, {2, 1, 0}, {{2, 1}}});
  const NodeId fresh = g.add_object({0, "plant", 0.9, {3, 1, 0}, {{3, 1}}});
  ScriptedBackend llm({{"", "not json"},
                       {"", R"([{"relationships": "next to"}])"},
                       {"", R"([{"relationships": "behind"}])"}});
  LlmTranscript t;
  DiagnosticLog log;
  const auto p = propose_edges_batched(g, std::span(&fresh, 1), llm, 4, 2, &t, &log);
  EXPECT_EQ(p.prompts_issued, 1);
  EXPECT_EQ(p.attempts, 3);
  EXPECT_EQ(p.dropped, 1);
  ASSERT_EQ(p.candidates.size(), 1u);
  EXPECT_EQ(p.candidates[0].relation, "next to");
  EXPECT_EQ(t.records.size(), 3u);
  EXPECT_FALSE(t.records[0].parsed);
  EXPECT_EQ(log.messages.size(), 1u);
}

TEST(EdgeProposalTest, NothingNewNoPrompt) {
  SceneGraph g;
  g.add_object({0, "sofa", 0.9, {1, 1, 0}, {{1, 1}}});
  ScriptedBackend llm({});
  const auto p = propose_edges_batched(g, {}, llm);
  EXPECT_EQ(p.prompts_issued, 0);
  EXPECT_TRUE(p.candidates.empty());
}

TEST(CovisibilityTest, RangeClassUsesHistory) {
  CovisibilityLog log;
  const NodeId f0[] = {1, 2};
  const NodeId f1[] = {3};
  log.record(0, f0);
  log.record(40, f1);
  RelationEdge e{1, 2, "next to"};
  e.proposed_at = 40;
  EXPECT_EQ(classify_edge_range(e, log), RangeClass::kShort);
  EXPECT_EQ(log.covisible_step(1, 2), 0);
  EXPECT_EQ(classify_edge_range({1, 3, "near"}, log), RangeClass::kLong);
  EXPECT_THROW(classify_edge_range({1, 99, "near"}, log), LookupError);
}

TEST(ShortEdgePruneTest, KeepDropAndFailOpen) {
  SceneGraph g;
  const NodeId monitor = g.add_object({0, "monitor", 0.9, {1, 1, 0}, {{1, 1}}});
  const NodeId desk = g.add_object({0, "desk", 0.9, {1, 1, 0}, {{2, 1}}});
  CovisibilityLog log;
  const NodeId frame[] = {monitor, desk};
  log.record(6, frame);
  LambdaVlm vlm([](const VlmQuery& q) { return q.relation == "above"; });
  RelationEdge above{monitor, desk, "above"};
  EXPECT_EQ(prune_short_edge(above, g, log, vlm), PruneDecision::kKeep);
  EXPECT_TRUE(above.verified);
  EXPECT_EQ(vlm.last.frame_step, 6);
  EXPECT_EQ(vlm.last.category_a, "monitor");
  RelationEdge inside{monitor, desk, "inside"};
  EXPECT_EQ(prune_short_edge(inside, g, log, vlm), PruneDecision::kDrop);

  LambdaVlm down([](const VlmQuery&) -> bool { throw ProviderUnavailable("offline"); });
  DiagnosticLog diag;
  RelationEdge e{monitor, desk, "above"};
  EXPECT_EQ(prune_short_edge(e, g, log, down, &diag), PruneDecision::kKeep);
  EXPECT_TRUE(e.flagged);
  EXPECT_FALSE(e.verified);
  EXPECT_EQ(diag.messages.size(), 1u);
}

// 3 m x 1.5 m room with walls on its boundary; optional wall column at x=1.25.
struct LongEdgeFixture {
  explicit LongEdgeFixture(bool blocked) {
    std::vector<std::string> rows(30, std::string(60, '.'));
    if (blocked) {
      for (auto& r : rows) r[25] = '#';
    }
    grid = grid_from_rows(rows);
    const std::vector<Segment> walls{{{0, 0}, {3, 0}}, {{0, 1.5}, {3, 1.5}},
                                     {{0, 0}, {0, 1.5}}, {{3, 0}, {3, 1.5}}};
    living = graph.upsert_room(room(0, "living room", {0, 0, 59, 29}, walls));
  }
  NodeId add(std::string cat, Vec2 p) {
    const Cell c = grid.to_cell(p);
    return graph.add_object({0, std::move(cat), 0.9, {p.x, p.y, 0.5}, {c}});
  }
  OccupancyGrid grid;
  SceneGraph graph;
  NodeId living = 0;
};

TEST(LongEdgePruneTest, AlignedClearSightlineKept) {
  LongEdgeFixture f(false);
  const NodeId sofa = f.add("sofa", {0.5, 1.0});
  const NodeId tv = f.add("tv", {2.0, 1.0});
  assign_room_affiliations(f.graph);
  EXPECT_EQ(prune_long_edge({sofa, tv, "opposite to"}, f.graph, f.grid), PruneDecision::kKeep);
}

TEST(LongEdgePruneTest, SkewedSightlineDropped) {
  LongEdgeFixture f(false);
  const NodeId sofa = f.add("sofa", {0.5, 0.3});
  const NodeId tv = f.add("tv", {2.0, 1.2});
  assign_room_affiliations(f.graph);
  EXPECT_EQ(prune_long_edge({sofa, tv, "opposite to"}, f.graph, f.grid), PruneDecision::kDrop);
  // Same pair with a wide tolerance passes.
  EXPECT_EQ(prune_long_edge({sofa, tv, "opposite to"}, f.graph, f.grid, 45.0),
            PruneDecision::kKeep);
}

TEST(LongEdgePruneTest, WallCrossingDropped) {
  LongEdgeFixture f(true);
  const NodeId sofa = f.add("sofa", {0.5, 1.0});
  const NodeId tv = f.add("tv", {2.0, 1.0});
  assign_room_affiliations(f.graph);
  EXPECT_EQ(prune_long_edge({sofa, tv, "opposite to"}, f.graph, f.grid), PruneDecision::kDrop);
}

TEST(LongEdgePruneTest, DifferentOrMissingRoomsDropped) {
  LongEdgeFixture f(false);
  const NodeId sofa = f.add("sofa", {0.5, 1.0});
  const NodeId tv = f.add("tv", {2.0, 1.0});
  EXPECT_EQ(prune_long_edge({sofa, tv, "opposite to"}, f.graph, f.grid), PruneDecision::kDrop);
  const NodeId other = f.graph.upsert_room(room(1, "bedroom", {100, 100, 101, 101}));
  f.graph.set_affiliation(f.living, sofa);
  f.graph.set_affiliation(other, tv);
  EXPECT_EQ(prune_long_edge({sofa, tv, "opposite to"}, f.graph, f.grid), PruneDecision::kDrop);
}

TEST(SubgraphTest, OnePerObjectWithParents) {
  SceneGraph g;
  const NodeId bedroom = g.upsert_room(room(0, "bedroom", {0, 0, 99, 99}));
  std::vector<NodeId> ids;
  for (const char* c : {"chair", "table", "bed", "lamp", "plant"}) {
    ids.push_back(g.add_object({0, c, 0.9, {1, 1, 0}, {{ids.size() * 3, 1}}}));
  }
  g.add_relation({ids[0], ids[1], "next to"});
  assign_room_affiliations(g);
  const auto subs = decompose_subgraphs(g);
  ASSERT_EQ(subs.size(), 5u);
  const Subgraph& chair = subs[0];
  EXPECT_EQ(chair.central, ids[0]);
  EXPECT_EQ(chair.neighbors, (std::vector<NodeId>{ids[1]}));
  EXPECT_EQ(chair.room, bedroom);
  const SubgraphText t = to_text(chair, g);
  EXPECT_EQ(t.nodes, (std::vector<std::string>{"chair", "table", "bedroom"}));
  EXPECT_EQ(t.edges, (std::vector<std::string>{"chair next to table"}));

  // Each relation edge appears in exactly its endpoints' subgraphs.
  int appearances = 0;
  for (const auto& s : subs) appearances += static_cast<int>(s.edges.size());
  EXPECT_EQ(appearances, 2);
}

TEST(SubgraphTest, IsolatedAndHidden) {
  SceneGraph g;
  const NodeId a = g.add_object({0, "toilet", 0.9, {1, 1, 0}, {{1, 1}}});
  const NodeId b = g.add_object({0, "sink", 0.9, {1, 1, 0}, {{2, 1}}});
  g.add_relation({a, b, "next to"});
  SubgraphOptions opts;
  opts.hidden = {b};
  const auto subs = decompose_subgraphs(g, opts);
  ASSERT_EQ(subs.size(), 1u);
  EXPECT_TRUE(subs[0].neighbors.empty());
  EXPECT_EQ(to_text(subs[0], g).nodes, (std::vector<std::string>{"toilet"}));
}

TEST(SceneGraphTest, RevisionAndLookups) {
  SceneGraph g;
  std::uint64_t rev = g.revision();
  const NodeId a = g.add_object({0, "a", 0.5, {}, {{0, 0}}});
  EXPECT_GT(g.revision(), rev);
  rev = g.revision();
  const NodeId b = g.add_object({0, "b", 0.5, {}, {{1, 0}}});
  EXPECT_TRUE(g.add_relation({a, b, "near"}));
  EXPECT_FALSE(g.add_relation({b, a, "above"}));
  EXPECT_GT(g.revision(), rev);
  EXPECT_THROW(g.add_relation({a, a, "near"}), InputError);
  EXPECT_THROW(g.add_relation({a, 999, "near"}), LookupError);
  EXPECT_THROW(g.object(999), LookupError);
  EXPECT_TRUE(g.remove_relation(a, b));
  EXPECT_FALSE(g.remove_relation(a, b));
  const auto snap = g.snapshot();
  EXPECT_EQ(snap["objects"].size(), 2u);
  EXPECT_EQ(snap["revision"], g.revision());
}

TEST(EdgeModeTest, StringRoundTrip) {
  for (EdgeMode m : {EdgeMode::kNone, EdgeMode::kShort, EdgeMode::kLong, EdgeMode::kAll}) {
    EXPECT_EQ(edge_mode_from_string(to_string(m)), m);
  }
  EXPECT_FALSE(edge_mode_from_string("some").has_value());
}

TEST(BuilderTest, OnePromptPerUpdateAndShortEdgesVerified) {
  int calls = 0;
  FunctionBackend llm = relation_llm("next to", &calls);
  LambdaVlm vlm([](const VlmQuery&) { return true; });
  SceneGraphBuilder b({}, RelatedCategoryLexicon::default_lexicon(), &llm, &vlm);
  const auto grid = sgnav::testing::free_grid(10, 10);
  const std::vector<DetectionObservation> f0{det("table", 1, 1), det("chair", 1.4, 1)};
  auto u = b.update(0, f0, {}, grid);
  EXPECT_EQ(u.prompts, 1);
  EXPECT_EQ(u.edges_kept, 1);
  EXPECT_EQ(b.graph().groups().size(), 1u);
  // Same detections again: nothing new, no prompt.
  u = b.update(1, f0, {}, grid);
  EXPECT_EQ(u.prompts, 0);
  EXPECT_TRUE(u.new_ids.empty());
  EXPECT_EQ(calls, 1);
  const auto f2 = det("sofa", 3, 1);
  u = b.update(2, std::span(&f2, 1), {}, grid);
  EXPECT_EQ(u.prompts, 1);
  EXPECT_EQ(u.edges_proposed, 2);
  // Sofa never shares a frame with the others and there are no rooms:
  // long edges fail the same-room test.
  EXPECT_EQ(u.edges_kept, 0);
  EXPECT_EQ(vlm.calls, 1);
}

TEST(BuilderTest, NoEdgesModeSkipsLlm) {
  int calls = 0;
  FunctionBackend llm = relation_llm("near", &calls);
  GraphBuildOptions opts;
  opts.edges = EdgeMode::kNone;
  SceneGraphBuilder b(opts, RelatedCategoryLexicon::default_lexicon(), &llm, nullptr);
  const std::vector<DetectionObservation> f0{det("table", 1, 1), det("chair", 1.4, 1)};
  b.update(0, f0, {}, sgnav::testing::free_grid(4, 4));
  EXPECT_EQ(calls, 0);
  EXPECT_TRUE(b.graph().relations().empty());
}

TEST(BuilderTest, LlmOutageIsLogged) {
  FunctionBackend llm("down", [](const CompletionRequest&) -> std::string {
    throw ProviderUnavailable("down");
  });
  SceneGraphBuilder b({}, RelatedCategoryLexicon::default_lexicon(), &llm, nullptr);
  const std::vector<DetectionObservation> f0{det("table", 1, 1), det("chair", 1.4, 1)};
  const auto u = b.update(0, f0, {}, sgnav::testing::free_grid(4, 4));
  EXPECT_EQ(u.edges_kept, 0);
  EXPECT_EQ(b.graph().objects().size(), 2u);
  EXPECT_FALSE(b.diagnostics().messages.empty());
}

}  // namespace
