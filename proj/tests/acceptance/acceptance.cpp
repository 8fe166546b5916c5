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

// Acceptance suite. Prints one PASS/FAIL line per criterion. The exit code is
// 0 only when the set of failing criteria equals --known-blocked exactly, so
// a known failure stays visible without masking regressions or silent fixes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgnav/cost_model.hpp"
#include "sgnav/harness.hpp"
#include "sgnav/mapping.hpp"
#include "sgnav/oracles.hpp"
#include "sgnav/planner.hpp"
#include "sgnav/prompts.hpp"
#include "sgnav/random.hpp"
#include "sgnav/reasoning.hpp"
#include "sgnav/scene_graph.hpp"
#include "sgnav/simulator.hpp"
#include "sgnav/structured.hpp"

namespace {

using namespace sgnav;
using Clock = std::chrono::steady_clock;

// Tolerances and budgets.
constexpr double kBoundConstant = 5.49;
constexpr double kCoefficientTolerance = 0.01;
constexpr double kBoundRuntime = 1.0;
constexpr double kBatchRatioLimit = 0.1;
constexpr double kLinearFitR2 = 0.999;
constexpr double kBatchRuntime = 5.0;
constexpr double kScoreTolerance = 1e-9;
constexpr double kScoreRuntime = 5.0;
constexpr double kMinMeanSpl = 0.5;
constexpr double kEndToEndRuntime = 60.0;
constexpr double kDecoyDefaultMinSr = 0.8;
constexpr double kDecoyNoRpMaxSr = 0.2;
constexpr double kDecoyRuntime = 60.0;
constexpr double kFmmSlack = 1.05;
constexpr int kRandomMaps = 100;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "" : "!") + what);
  }
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Shared between criteria 5, 6 and 8.
std::vector<Aggregate> g_reports;

// --- 1 ------------------------------------------------------------------------

Outcome complexity_bound() {
  Outcome o;
  const auto t0 = Clock::now();
  CostModel model;  // L_pro 1000, L_res 10 (alpha 0.01), r 2
  const auto violations = bound_violations(model, kBoundConstant);
  const auto first = verify_complexity_bound(model, kBoundConstant);
  const double coeff = reported_coefficient(5, model.alpha(), model.exponent);
  const double secs = seconds_since(t0);
  o.check(!first.has_value(),
          "sweep violations " + std::to_string(violations.size()) + "/500" +
              (first ? " first m=" + std::to_string(first->m) + " n=" + std::to_string(first->n)
                     : ""));
  o.check(std::fabs(coeff - kBoundConstant) <= kCoefficientTolerance,
          "coefficient " + fmt(coeff, 6));
  o.check(secs < kBoundRuntime, "runtime " + fmt(secs) + "s");
  return o;
}

// --- 2 ------------------------------------------------------------------------

Outcome batched_edges() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto& templates = room_templates();
  std::vector<std::string> cats;
  for (const auto& r : templates) {
    for (const auto& c : r.clusters) {
      cats.push_back(c.anchor);
      for (const auto& s : c.satellites) cats.push_back(s.category);
    }
  }
  const int m = 2;
  std::vector<double> pairs_x;
  std::vector<double> naive_y;
  double ratio_at_100 = 0.0;
  bool one_prompt = true;
  for (int n : {1, 10, 50, 100}) {
    SceneGraph g;
    for (int i = 0; i < n; ++i) {
      g.add_object({0, cats[static_cast<std::size_t>(i) % cats.size()], 0.9,
                    {double(i), 0, 0}, {{i, 0}}});
    }
    std::vector<NodeId> fresh;
    for (int i = 0; i < m; ++i) {
      fresh.push_back(g.add_object({0, cats[static_cast<std::size_t>(i * 7 + 3) % cats.size()],
                                    0.9, {double(i), 3, 0}, {{i, 60}}}));
    }
    PriorOracleBackend oracle;
    SimulatedLatencyBackend batched(oracle, 1e-3);
    const EdgeProposal p = propose_edges_batched(g, fresh, batched);
    one_prompt = one_prompt && p.prompts_issued == 1 && batched.requests() == 1 &&
                 p.candidates.size() == p.pairs.size();

    SimulatedLatencyBackend naive(oracle, 1e-3);
    for (const auto& [a, b] : p.pairs) {
      const CategoryPair one{g.object(a).category, g.object(b).category};
      CompletionRequest req;
      req.prompt = edge_proposal_prompt(std::span<const CategoryPair>(&one, 1));
      parse_relations(naive.complete(req));
    }
    pairs_x.push_back(static_cast<double>(p.pairs.size()));
    naive_y.push_back(naive.simulated_seconds());
    if (n == 100) ratio_at_100 = batched.simulated_seconds() / naive.simulated_seconds();
  }
  // Least-squares line through (pairs, naive time).
  const double k = static_cast<double>(pairs_x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < pairs_x.size(); ++i) {
    sx += pairs_x[i];
    sy += naive_y[i];
    sxx += pairs_x[i] * pairs_x[i];
    sxy += pairs_x[i] * naive_y[i];
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / k;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < pairs_x.size(); ++i) {
    const double fit = slope * pairs_x[i] + icpt;
    ss_res += (naive_y[i] - fit) * (naive_y[i] - fit);
    ss_tot += (naive_y[i] - sy / k) * (naive_y[i] - sy / k);
  }
  const double r2 = 1.0 - ss_res / ss_tot;
  const double secs = seconds_since(t0);
  o.check(one_prompt, "one prompt per update for n in {1,10,50,100}");
  o.check(slope > 0 && r2 >= kLinearFitR2, "naive linear fit R2 " + fmt(r2, 6));
  o.check(ratio_at_100 < kBatchRatioLimit, "batched/naive at n=100 " + fmt(ratio_at_100));
  o.check(secs < kBatchRuntime, "runtime " + fmt(secs) + "s");
  return o;
}

// --- 3 ------------------------------------------------------------------------

Outcome frontier_scoring() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Vec2> fr(static_cast<std::size_t>(rng.uniform_int(1, 12)));
    for (auto& f : fr) f = {rng.uniform(-15, 15), rng.uniform(-15, 15)};
    std::vector<SubgraphScore> s(static_cast<std::size_t>(rng.uniform_int(0, 20)));
    std::vector<Vec2> c(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      s[j].subgraph = static_cast<NodeId>(j + 1);
      s[j].p_sub = subgraph_probability(rng.uniform(0.0, 12.0));
      c[j] = {rng.uniform(-15, 15), rng.uniform(-15, 15)};
    }
    const auto got = score_frontiers(std::span<const Vec2>(fr), s, c);
    for (std::size_t i = 0; i < fr.size(); ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < s.size(); ++j) {
        const double d = std::hypot(fr[i].x - c[j].x, fr[i].y - c[j].y);
        sum += s[j].p_sub / (d < 0.5 ? 0.5 : d);
      }
      worst = std::max(worst, std::fabs(got[i].score - sum));
    }
  }
  int invariant = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec2> fr(static_cast<std::size_t>(rng.uniform_int(2, 10)));
    for (auto& f : fr) f = {rng.uniform(-15, 15), rng.uniform(-15, 15)};
    std::vector<SubgraphScore> s(static_cast<std::size_t>(rng.uniform_int(1, 15)));
    std::vector<Vec2> c(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      s[j].subgraph = static_cast<NodeId>(j + 1);
      s[j].p_sub = subgraph_probability(rng.uniform(0.0, 12.0));
      c[j] = {rng.uniform(-15, 15), rng.uniform(-15, 15)};
    }
    std::vector<double> agent(fr.size());
    for (auto& d : agent) d = rng.uniform(0, 20);
    const double lambda = std::exp(rng.uniform(-5, 5));
    auto scaled = s;
    for (auto& x : scaled) x.p_sub *= lambda;
    const auto a = select_frontier(score_frontiers(std::span<const Vec2>(fr), s, c), agent);
    const auto b = select_frontier(score_frontiers(std::span<const Vec2>(fr), scaled, c), agent);
    invariant += a == b;
  }
  const double secs = seconds_since(t0);
  o.check(worst <= kScoreTolerance, "max |score - oracle| " + fmt(worst, 3));
  o.check(invariant == 100, "argmax invariant " + std::to_string(invariant) + "/100");
  o.check(secs < kScoreRuntime, "runtime " + fmt(secs) + "s");
  return o;
}

// --- 4 ------------------------------------------------------------------------

// Drives the state through credibility_step with single-subgraph fixtures
// placed so that S_k equals the requested value exactly.
ReperceptionVerdict verdict_for(const std::vector<double>& s_values, double c_k = 1.0) {
  CredibilityState st;
  for (double s : s_values) {
    SubgraphScore sc;
    sc.subgraph = 1;
    sc.p_sub = s;
    const std::vector<SubgraphScore> scores{sc};
    const std::vector<Vec2> centers{{1.0, 0.0}};
    const auto u = credibility_step(st, c_k, scores, centers, {0.0, 0.0});
    st = u.state;
    const auto v = reperception_verdict(st);
    if (v != ReperceptionVerdict::kContinue) return v;
  }
  return reperception_verdict(st);
}

Outcome reperception() {
  Outcome o;
  o.check(verdict_for({0.5, 0.4}) == ReperceptionVerdict::kAccept, "[0.5,0.4] accepts");
  o.check(verdict_for(std::vector<double>(10, 0.05)) == ReperceptionVerdict::kReject,
          "0.05 x10 rejects");
  std::vector<double> at_nmax(9, 0.0);
  at_nmax.push_back(0.8);
  o.check(verdict_for(at_nmax) == ReperceptionVerdict::kReject, "crossing at N_max rejects");
  std::vector<double> before(8, 0.0);
  before.push_back(0.8);
  o.check(verdict_for(before) == ReperceptionVerdict::kAccept, "crossing at N_max-1 accepts");
  o.check(verdict_for({0.8}) == ReperceptionVerdict::kAccept, "accept at first observation");

  // Zero confidence: S_k = 0 and the running sum is untouched.
  CredibilityState st;
  st.cumulative = 0.3;
  st.observations = 2;
  st.history = {0.2, 0.1};
  SubgraphScore sc;
  sc.p_sub = 7.0;
  const std::vector<SubgraphScore> scores{sc};
  const std::vector<Vec2> centers{{0.0, 0.0}};
  const auto u = credibility_step(st, 0.0, scores, centers, {0.0, 0.0});
  o.check(u.s_k == 0.0 && u.state.cumulative == 0.3, "zero confidence adds nothing");
  o.check(verdict_for(std::vector<double>(10, 5.0), 0.0) == ReperceptionVerdict::kReject,
          "zero confidence never accepts");

  CredibilityState full;
  full.observations = full.n_max;
  const auto over = credibility_step(full, 1.0, scores, centers, {0.0, 0.0});
  o.check(over.overflow && over.state.observations == full.n_max, "overflow at N_max");
  return o;
}

// --- 5 ------------------------------------------------------------------------

std::string episode_bytes(const EpisodeResult& r) {
  return to_json(r, true).dump() + "\n" + trace_jsonl(r) + r.transcript.to_json().dump();
}

Outcome end_to_end() {
  Outcome o;
  const auto t0 = Clock::now();
  std::vector<BenchmarkRow> rows;
  int identical = 0;
  int max_steps = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scene scene = generate_scene(seed);
    PriorOracleBackend a;
    PriorOracleBackend b;
    const EpisodeResult first = run_episode(scene, {}, a);
    const EpisodeResult second = run_episode(scene, {}, b);
    identical += episode_bytes(first) == episode_bytes(second);
    max_steps = std::max(max_steps, first.steps);
    rows.push_back({seed, first, ""});
  }
  const Aggregate agg = aggregate(rows);
  g_reports.push_back(agg);
  const double secs = seconds_since(t0);
  o.check(agg.sr && *agg.sr == 1.0, "SR " + fmt(agg.sr.value_or(0)));
  o.check(agg.mean_spl && *agg.mean_spl >= kMinMeanSpl,
          "mean SPL " + fmt(agg.mean_spl.value_or(0)));
  o.check(max_steps < kMaxEpisodeSteps, "max steps " + std::to_string(max_steps));
  o.check(identical == 20, "identical repeats " + std::to_string(identical) + "/20");
  o.check(secs < kEndToEndRuntime, "runtime " + fmt(secs) + "s");
  return o;
}

// --- 6 ------------------------------------------------------------------------

Outcome decoy_ablation() {
  Outcome o;
  const auto t0 = Clock::now();
  SuiteConfig suite;
  for (std::uint64_t s = 0; s < 10; ++s) suite.seeds.push_back(s);
  suite.scene.decoy_in_start_room = true;
  auto factory = [](const Scene&) { return std::make_unique<PriorOracleBackend>(); };
  const BenchmarkReport with_rp = run_benchmark(suite, factory);
  suite.episode.flags.no_reperception = true;
  const BenchmarkReport without = run_benchmark(suite, factory);
  g_reports.push_back(with_rp.summary);
  g_reports.push_back(without.summary);
  const double secs = seconds_since(t0);
  const double sr = with_rp.summary.sr.value_or(0);
  const double sr_no = without.summary.sr.value_or(1);
  o.check(with_rp.summary.completed == 10 && sr >= kDecoyDefaultMinSr, "default SR " + fmt(sr));
  o.check(without.summary.completed == 10 && sr_no <= kDecoyNoRpMaxSr,
          "no-reperception SR " + fmt(sr_no));
  o.check(secs < kDecoyRuntime, "runtime " + fmt(secs) + "s");
  return o;
}

// --- 7 ------------------------------------------------------------------------

std::string golden(const std::string& name) {
  std::ifstream in(std::string(SGNAV_GOLDEN_DIR) + "/" + name, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  std::string s = os.str();
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

Outcome prompt_fidelity() {
  Outcome o;
  const SubgraphText sub{{"sofa", "table", "plant"}, {"sofa next to table", "plant behind sofa"}};
  const std::vector<CategoryPair> pairs{{"bed", "nightstand"}, {"sink", "mirror"}};
  o.check(edge_proposal_prompt(pairs) == golden("edge_proposal.txt"), "edge connecting");
  o.check(object_distance_prompt("bed", "toilet") == golden("object_distance.txt"), "step 1");
  o.check(question_prompt("sofa", "tv_monitor") == golden("question.txt"), "step 2");
  o.check(answer_prompt(sub, "Is there a TV opposite to the sofa?") == golden("answer.txt"),
          "step 3");
  o.check(subgraph_distance_prompt(sub, "tv_monitor") == golden("subgraph_distance.txt"),
          "step 4");

  bool literal = true;
  try {
    literal = literal && parse_relations(R"([{"relationships": "next to"}, {"relationships": "above"}])") ==
                             RelationList{"next to", "above"};
    const auto d = parse_distance(
        R"({"distance": 0.5, "reason": "Because there is always a chair next to the table."})");
    literal = literal && d.distance == 0.5;
    literal = literal && parse_question(R"({"question": "Is there a table next to the sofa?"})")
                                 .question == "Is there a table next to the sofa?";
    literal = literal && parse_answer(R"({"answer": "Yes"})").answer == "Yes";
  } catch (const Error&) {
    literal = false;
  }
  o.check(literal, "literal examples parse");

  const std::vector<std::pair<StructuredValue, ResponseShape>> shapes{
      {RelationList{"opposite to", "behind"}, ResponseShape::kRelationArray},
      {DistanceReason{2, "Because TV and sofa are on both sides of table."},
       ResponseShape::kDistanceReason},
      {Question{"Is there a table next to the sofa?"}, ResponseShape::kQuestion},
      {Answer{"Yes"}, ResponseShape::kAnswer},
  };
  bool round_trip = true;
  for (const auto& [v, shape] : shapes) {
    try {
      round_trip = round_trip && parse_structured(render(v), shape) == v;
    } catch (const Error&) {
      round_trip = false;
    }
  }
  o.check(round_trip, "round trip of all four shapes");
  return o;
}

// --- 8 ------------------------------------------------------------------------

Outcome metrics() {
  Outcome o;
  o.check(compute_spl(true, 5.0, 5.0) == 1.0, "SPL path=optimal");
  o.check(compute_spl(false, 5.0, 5.0) == 0.0, "SPL failure");
  o.check(compute_spl(true, 10.0, 5.0) == 0.5, "SPL path=2x optimal");
  o.check(compute_soft_spl(6.0, 0.0, 4.0, 4.0) == 1.0, "SoftSPL perfect");
  o.check(compute_soft_spl(6.0, 6.0, 4.0, 4.0) == 0.0, "SoftSPL no progress");
  o.check(compute_soft_spl(6.0, 3.0, 4.0, 4.0) == 0.5, "SoftSPL half progress");
  bool bounded = !g_reports.empty();
  for (const Aggregate& a : g_reports) {
    bounded = bounded && a.sr && a.mean_spl && *a.mean_spl <= *a.sr;
  }
  o.check(bounded, "mean SPL <= SR on " + std::to_string(g_reports.size()) + " reports");
  return o;
}

// --- 9 ------------------------------------------------------------------------

// Random map: free background, rectangular obstacles, unknown patches.
OccupancyGrid random_map(Rng& rng, int size, bool with_unknown) {
  OccupancyGrid g(GridSpec{size, size, 0.05, {0.0, 0.0}});
  std::vector<CellState> cells(static_cast<std::size_t>(size) * size, CellState::kFree);
  auto paint = [&](CellState s, int count, int max_extent) {
    for (int k = 0; k < count; ++k) {
      const int x0 = rng.uniform_int(0, size - 1);
      const int y0 = rng.uniform_int(0, size - 1);
      const int w = rng.uniform_int(1, max_extent);
      const int h = rng.uniform_int(1, max_extent);
      for (int y = y0; y < std::min(size, y0 + h); ++y) {
        for (int x = x0; x < std::min(size, x0 + w); ++x) cells[y * size + x] = s;
      }
    }
  };
  if (with_unknown) paint(CellState::kUnknown, rng.uniform_int(2, 6), size / 3);
  paint(CellState::kOccupied, rng.uniform_int(4, 14), size / 4);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const CellState s = cells[y * size + x];
      if (s != CellState::kUnknown) g.set({x, y}, CellState::kFree);
      if (s == CellState::kOccupied) g.set({x, y}, CellState::kOccupied);
    }
  }
  return g;
}

// 8-connected grid Dijkstra over free cells.
double dijkstra(const OccupancyGrid& g, Cell s, Cell t) {
  const int w = g.width();
  std::vector<double> dist(static_cast<std::size_t>(w) * g.height(), INFINITY);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[s.y * w + s.x] = 0.0;
  pq.push({0.0, s.y * w + s.x});
  while (!pq.empty()) {
    auto [d, i] = pq.top();
    pq.pop();
    if (d > dist[i]) continue;
    const int x = i % w;
    const int y = i / w;
    if (x == t.x && y == t.y) return d;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell n{x + dx, y + dy};
        if (!g.is_free(n)) continue;
        const double nd = d + g.resolution() * (dx != 0 && dy != 0 ? std::sqrt(2.0) : 1.0);
        if (nd < dist[n.y * w + n.x]) {
          dist[n.y * w + n.x] = nd;
          pq.push({nd, n.y * w + n.x});
        }
      }
    }
  }
  return INFINITY;
}

Cell random_free(Rng& rng, const OccupancyGrid& g) {
  for (;;) {
    const Cell c{rng.uniform_int(0, g.width() - 1), rng.uniform_int(0, g.height() - 1)};
    if (g.is_free(c)) return c;
  }
}

Outcome map_properties() {
  Outcome o;
  Rng rng(99);

  std::size_t reported = 0;
  std::size_t valid = 0;
  for (int k = 0; k < kRandomMaps; ++k) {
    const OccupancyGrid g = random_map(rng, 64, true);
    for (const Frontier& f : extract_frontiers(g, 1)) {
      for (Cell c : f.cells) {
        ++reported;
        // Predicate: free with at least one unknown 4-neighbour.
        bool ok = g.at(c) == CellState::kFree;
        bool unknown_nb = false;
        for (Cell n : {Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y}, Cell{c.x, c.y + 1},
                       Cell{c.x, c.y - 1}}) {
          unknown_nb = unknown_nb || (g.in_bounds(n) && g.at(n) == CellState::kUnknown);
        }
        valid += ok && unknown_nb;
      }
    }
  }
  o.check(reported > 0 && valid == reported,
          "frontier predicate " + std::to_string(valid) + "/" + std::to_string(reported));

  int within = 0;
  int compared = 0;
  double worst = 0.0;
  PlannerOptions po;
  po.unknown_traversable = false;
  for (int k = 0; k < kRandomMaps; ++k) {
    const OccupancyGrid g = random_map(rng, 64, false);
    double d = INFINITY;
    Cell s{};
    Cell t{};
    for (int tries = 0; tries < 50 && !std::isfinite(d); ++tries) {
      s = random_free(rng, g);
      t = random_free(rng, g);
      if (s == t) continue;
      d = dijkstra(g, s, t);
    }
    if (!std::isfinite(d)) continue;
    ++compared;
    const auto p = plan_path(g, g.cell_center(s), g.cell_center(t), po);
    if (!p) continue;
    const double ratio = p->length / d;
    worst = std::max(worst, ratio);
    within += p->length <= kFmmSlack * d;
  }
  o.check(compared == kRandomMaps && within == compared,
          "FMM within 5% of Dijkstra " + std::to_string(within) + "/" +
              std::to_string(compared) + " (worst ratio " + fmt(worst) + ")");

  int monotone = 0;
  const int episodes = 10;
  for (std::uint64_t seed = 1000; seed < 1000 + episodes; ++seed) {
    SceneParams sp;
    sp.false_positive_rate = 0.2;
    const Scene scene = generate_scene(seed, sp);
    EpisodeConfig cfg;
    cfg.track_unknown = true;
    PriorOracleBackend oracle;
    const EpisodeResult r = run_episode(scene, cfg, oracle);
    bool ok = !r.trace.empty();
    std::size_t prev = SIZE_MAX;
    for (const StepRecord& rec : r.trace) {
      ok = ok && rec.unknown_cells && *rec.unknown_cells <= prev;
      if (rec.unknown_cells) prev = *rec.unknown_cells;
    }
    monotone += ok;
  }
  o.check(monotone == episodes, "unknown cells non-increasing " + std::to_string(monotone) +
                                    "/" + std::to_string(episodes) + " episodes");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> known_blocked;
  app.add_option("--known-blocked", known_blocked,
                 "Criteria expected to fail; any other outcome is an error")
      ->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"complexity bound sweep and coefficient", complexity_bound},
      {"batched edge proposal efficiency", batched_edges},
      {"frontier score oracle and argmax invariance", frontier_scoring},
      {"re-perception semantics", reperception},
      {"end-to-end success and determinism", end_to_end},
      {"re-perception ablation on decoy scenes", decoy_ablation},
      {"prompt fidelity and structured round trip", prompt_fidelity},
      {"SPL and SoftSPL", metrics},
      {"mapping and planner properties", map_properties},
  };

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.notes.push_back(std::string("!exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    if (!out.pass) failed.insert(id);
    std::cout << (out.pass ? "PASS" : "FAIL") << " AC" << id << " " << criteria[i].first << " ("
              << fmt(secs, 3) << "s)";
    for (const std::string& n : out.notes) std::cout << " | " << n;
    std::cout << std::endl;
  }

  const std::set<int> expected(known_blocked.begin(), known_blocked.end());
  std::cout << "failed:";
  for (int f : failed) std::cout << " " << f;
  std::cout << "  known-blocked:";
  for (int f : expected) std::cout << " " << f;
  std::cout << "\n";
  if (failed != expected) {
    std::cout << "result: failing set differs from the known-blocked set\n";
    return 1;
  }
  std::cout << "result: failing set matches the known-blocked set\n";
  return 0;
}
