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

#include "sgnav/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "sgnav/errors.hpp"
#include "sgnav/oracles.hpp"
#include "sgnav/random.hpp"

namespace sgnav {

using nlohmann::ordered_json;

// --- metrics --------------------------------------------------------------------

double compute_spl(bool success, double path, double optimal) {
  if (!(path >= 0.0) || !(optimal >= 0.0)) throw InputError("path lengths must be non-negative");
  if (!success) return 0.0;
  if (optimal == 0.0) return 1.0;
  return optimal / std::max(path, optimal);
}

double compute_soft_spl(double d_init, double d_final, double path, double optimal) {
  if (!(d_init > 0.0)) throw InputError("initial goal distance must be positive");
  if (!(path >= 0.0) || !(optimal >= 0.0) || !(d_final >= 0.0)) {
    throw InputError("lengths must be non-negative");
  }
  const double progress = std::max(0.0, 1.0 - d_final / d_init);
  const double efficiency = optimal == 0.0 ? 1.0 : optimal / std::max(path, optimal);
  return progress * efficiency;
}

// --- episodes -------------------------------------------------------------------

ordered_json to_json(const AblationFlags& f) {
  ordered_json j;
  j["no_reperception"] = f.no_reperception;
  j["no_scene_graph"] = f.no_scene_graph;
  j["no_rooms"] = f.no_rooms;
  j["no_groups"] = f.no_groups;
  j["edges"] = std::string(to_string(f.edges));
  j["prompting"] = std::string(to_string(f.prompting));
  return j;
}

namespace {

// Counts requests and consecutive failures of the wrapped backend.
class CountingBackend : public LlmBackend {
 public:
  explicit CountingBackend(LlmBackend& inner) : inner_(inner) {}

  std::string complete(const CompletionRequest& request) override {
    ++requests_;
    try {
      std::string r = inner_.complete(request);
      consecutive_failures_ = 0;
      return r;
    } catch (const Error&) {
      ++consecutive_failures_;
      throw;
    }
  }
  std::string name() const override { return inner_.name(); }

  int requests() const { return requests_; }
  int consecutive_failures() const { return consecutive_failures_; }

 private:
  LlmBackend& inner_;
  int requests_ = 0;
  int consecutive_failures_ = 0;
};

struct ScoredGraph {
  std::vector<SubgraphScore> scores;
  std::vector<Vec2> centers;
  std::map<NodeId, SubgraphScore> by_id;
};

class Agent {
 public:
  Agent(const Scene& scene, const EpisodeConfig& config, LlmBackend& llm, VlmBackend* vlm)
      : scene_(scene),
        config_(config),
        goal_(config.goal.empty() ? scene.goal_category : config.goal),
        sim_(scene, goal_, config.sim),
        map_(scene.grid),
        llm_(llm),
        builder_(build_options(config.flags), RelatedCategoryLexicon::default_lexicon(), &llm_, vlm),
        rng_(hash_keys({scene.seed, 0xE715})) {
    planner_.inflation_radius = 0.3;
    nav_ = Navigator(planner_);
  }

  EpisodeResult run();

 private:
  static GraphBuildOptions build_options(const AblationFlags& f) {
    GraphBuildOptions o;
    o.use_groups = !f.no_groups && !f.no_scene_graph;
    o.use_rooms = !f.no_rooms && !f.no_scene_graph;
    o.edges = f.no_scene_graph ? EdgeMode::kNone : f.edges;
    return o;
  }

  void perceive(const Observation& obs, int step) {
    integrate_depth(map_, state_.pose, obs.scan, config_.sim.sensor);
    update_ = builder_.update(step, obs.detections, obs.rooms, map_);
    obs_ = obs;
  }

  ScoredGraph score_graph(const std::set<NodeId>& hidden);
  std::optional<NodeId> goal_detection() const;
  bool select_target(StepRecord& rec);
  std::optional<Action> explore(StepRecord& rec);
  std::optional<Action> approach_step(StepRecord& rec);

  const Scene& scene_;
  const EpisodeConfig& config_;
  std::string goal_;
  Simulator sim_;
  OccupancyGrid map_;
  CountingBackend llm_;
  SceneGraphBuilder builder_;
  Rng rng_;
  PlannerOptions planner_;
  Navigator nav_;
  ScoreCache cache_;
  LlmTranscript cot_transcript_;
  EpisodeState state_;
  Observation obs_;
  GraphUpdate update_;

  std::optional<ApproachAndObserve> approach_;
  CredibilityState cred_;
  std::set<NodeId> blacklist_;
  std::vector<Vec2> failed_anchors_;
  std::optional<Frontier> target_;
  int since_select_ = 0;
  int look_turns_ = 360 / kTurnStep - 1;
  int rejected_ = 0;
  std::vector<std::string> explanations_;
};

ScoredGraph Agent::score_graph(const std::set<NodeId>& hidden) {
  ScoredGraph out;
  if (config_.flags.no_scene_graph) return out;
  const SceneGraph& g = builder_.graph();
  SubgraphOptions so;
  so.include_groups = !config_.flags.no_groups;
  so.include_rooms = !config_.flags.no_rooms;
  so.hidden = hidden;
  CotOptions co;
  co.mode = config_.flags.prompting;
  for (const Subgraph& sg : decompose_subgraphs(g, so)) {
    SubgraphScore s;
    s.subgraph = sg.central;
    s.text = to_text(sg, g);
    s.graph_revision = g.revision();
    const std::string key = ScoreCache::key(s.text, goal_, co.mode);
    const CotResult* cached = cache_.find(key);
    if (cached == nullptr) {
      CotResult r = cot_predict_distance(s.text, goal_, llm_, co);
      cot_transcript_.append(r.transcript);
      cache_.store(key, std::move(r));
      cached = cache_.find(key);
    }
    s.predicted_distance = cached->distance;
    s.reason = cached->reason;
    s.flagged = cached->flagged;
    s.p_sub = subgraph_probability(cached->distance);
    out.centers.push_back(g.object(sg.central).centroid.xy());
    out.by_id[sg.central] = s;
    out.scores.push_back(std::move(s));
  }
  return out;
}

std::optional<NodeId> Agent::goal_detection() const {
  std::optional<NodeId> best;
  double best_d = kUnreachable;
  for (std::size_t i = 0; i < obs_.detections.size(); ++i) {
    const auto& d = obs_.detections[i];
    if (d.category != goal_) continue;
    const NodeId id = update_.detection_ids.at(i);
    if (blacklist_.count(id)) continue;
    const double dist = distance(d.centroid.xy(), state_.pose.position);
    if (dist < best_d) {
      best_d = dist;
      best = id;
    }
  }
  return best;
}

bool Agent::select_target(StepRecord& rec) {
  std::vector<Frontier> frontiers;
  for (Frontier& f : extract_frontiers(map_)) {
    const Vec2 a = map_.cell_center(f.anchor);
    const bool failed = std::any_of(failed_anchors_.begin(), failed_anchors_.end(),
                                    [&](Vec2 p) { return distance(p, a) < 0.75; });
    if (!failed) frontiers.push_back(std::move(f));
  }
  if (frontiers.empty()) return false;

  const Cell agent = map_.to_cell(state_.pose.position);
  const DistanceField field = distance_field(map_, std::span<const Cell>(&agent, 1), {false, 0.25});
  std::vector<Frontier> reachable;
  std::vector<double> dist;
  for (Frontier& f : frontiers) {
    const double d = field.at(f.anchor);
    if (d < kUnreachable) {
      dist.push_back(d);
      reachable.push_back(std::move(f));
    }
  }
  if (reachable.empty()) return false;

  std::size_t chosen = 0;
  if (config_.flags.no_scene_graph) {
    const double best = *std::min_element(dist.begin(), dist.end());
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (dist[i] <= best + 1e-9) ties.push_back(i);
    }
    chosen = ties[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<int>(ties.size()) - 1))];
  } else {
    ScoredGraph sg = score_graph(blacklist_);
    const auto scores = score_frontiers(std::span<const Frontier>(reachable), sg.scores, sg.centers);
    chosen = *select_frontier(scores, dist);
    if (config_.explain && !sg.scores.empty()) {
      Explanation ex = explain_decision(chosen, scores, sg.by_id, goal_, llm_);
      cot_transcript_.append(ex.transcript);
      explanations_.push_back("step " + std::to_string(state_.steps) + ": " + ex.text);
    }
  }
  target_ = reachable[chosen];
  const Cell anchor = target_->anchor;
  nav_.set_goal(cells_within(map_, std::span<const Cell>(&anchor, 1), 0.5));
  since_select_ = 0;
  rec.frontier = chosen;
  return true;
}

std::optional<Action> Agent::explore(StepRecord& rec) {
  rec.mode = "explore";
  for (int attempt = 0; attempt < 4; ++attempt) {
    if (!target_ || since_select_ >= config_.reselect_interval) {
      if (!select_target(rec)) return std::nullopt;
    }
    const Navigator::Step s = nav_.step(map_, state_.pose);
    if (s.status == Navigator::Status::kMoving) return s.action;
    // Frontiers that survive a visit are unobservable pockets; drop them.
    failed_anchors_.push_back(map_.cell_center(target_->anchor));
    target_.reset();
  }
  // Arrived repeatedly without revealing anything: look around.
  return Action::kTurnLeft;
}

std::optional<Action> Agent::approach_step(StepRecord& rec) {
  const NodeId cand = *cred_.candidate;
  rec.candidate = cand;
  ApproachAndObserve::Step s = approach_->next(map_, state_.pose);
  if (s.observe) {
    double c_k = 0.0;
    bool seen = false;
    for (std::size_t i = 0; i < obs_.detections.size(); ++i) {
      if (update_.detection_ids.at(i) != cand) continue;
      seen = true;
      c_k = std::max(c_k, obs_.detections[i].confidence);
    }
    if (!seen && approach_->relocate(map_, state_.pose)) {
      rec.mode = "approach";
      return approach_step(rec);
    }
    std::set<NodeId> hidden = blacklist_;
    hidden.insert(cand);
    ScoredGraph sg = score_graph(hidden);
    const CredibilityUpdate u = credibility_step(cred_, c_k, sg.scores, sg.centers,
                                                 builder_.graph().object(cand).centroid.xy());
    cred_ = u.state;
    const ReperceptionVerdict v = reperception_verdict(cred_);
    rec.s_k = u.s_k;
    rec.verdict = std::string(to_string(v));
    approach_->report_verdict(v == ReperceptionVerdict::kAccept   ? ApproachAndObserve::Verdict::kAccept
                              : v == ReperceptionVerdict::kReject ? ApproachAndObserve::Verdict::kReject
                                                                  : ApproachAndObserve::Verdict::kContinue);
    rec.mode = "observe";
    s = approach_->next(map_, state_.pose);
  }
  if (approach_->phase() == ApproachAndObserve::Phase::kRejected) {
    blacklist_.insert(cand);
    ++rejected_;
    approach_.reset();
    cred_ = {};
    if (rec.verdict.empty()) rec.verdict = "reject";
    return std::nullopt;
  }
  if (rec.mode.empty()) {
    rec.mode = approach_->phase() == ApproachAndObserve::Phase::kTravel ? "approach" : "final";
  }
  return s.action;
}

EpisodeResult Agent::run() {
  EpisodeResult result;
  result.seed = scene_.seed;
  result.goal = goal_;
  state_ = sim_.reset();
  perceive(sim_.observe(state_.pose, 0), 0);

  while (!state_.terminated) {
    if (llm_.consecutive_failures() >= config_.abort_after_failures) {
      state_.terminated = true;
      state_.cause = TerminationCause::kAborted;
      result.diagnostic = "language model unavailable: " +
                          std::to_string(llm_.consecutive_failures()) +
                          " consecutive failed requests";
      break;
    }
    StepRecord rec;
    std::optional<Action> act;
    try {
      if (!approach_) {
        if (auto cand = goal_detection()) {
          const ObjectNode& o = builder_.graph().object(*cand);
          approach_.emplace(o.centroid.xy(), o.footprint, ApproachOptions{}, planner_);
          cred_ = {};
          cred_.candidate = *cand;
          // Credibility is a sum over subgraph scores, so without a graph it
          // is identically zero; that ablation also runs without re-perception.
          if (config_.flags.no_reperception || config_.flags.no_scene_graph) {
            approach_->accept_immediately();
          }
          target_.reset();
          nav_.clear();
        }
      }
      if (approach_) act = approach_step(rec);
      if (!act && look_turns_ > 0) {
        act = Action::kTurnLeft;
        --look_turns_;
        rec.mode = "look";
      }
      if (!act) act = explore(rec);
    } catch (const ProviderUnavailable& e) {
      state_.terminated = true;
      state_.cause = TerminationCause::kAborted;
      result.diagnostic = e.what();
      break;
    }
    if (!act) {
      state_.terminated = true;
      state_.cause = TerminationCause::kExplorationExhausted;
      break;
    }
    Simulator::StepOutcome out = sim_.step(state_, *act);
    state_ = std::move(out.state);
    if (out.collision && out.contact) {
      map_.set(*out.contact, CellState::kOccupied);
      nav_.notify_collision();
      if (approach_) approach_->notify_collision();
    }
    perceive(out.observation, state_.steps);
    ++since_select_;

    rec.step = state_.steps;
    rec.action = *act;
    rec.pose = state_.pose;
    rec.collision = out.collision;
    if (config_.track_unknown) rec.unknown_cells = map_.count(CellState::kUnknown);
    result.trace.push_back(std::move(rec));
  }

  result.success = sim_.check_success(state_);
  result.steps = state_.steps;
  result.collisions = state_.collisions;
  result.cause = state_.cause;
  result.path_length = state_.path_length;
  result.optimal_length = sim_.optimal_path_length();
  result.d_init = sim_.distance_to_goal(scene_.start.position);
  result.d_final = sim_.distance_to_goal(state_.pose.position);
  result.spl = compute_spl(result.success, result.path_length, result.optimal_length);
  if (result.d_init > 0.0 && std::isfinite(result.d_init) && std::isfinite(result.d_final)) {
    result.soft_spl = compute_soft_spl(result.d_init, result.d_final, result.path_length,
                                       result.optimal_length);
  } else {
    result.soft_spl = result.success ? 1.0 : 0.0;
  }
  if (state_.stop_issued && cred_.candidate) {
    const int truth = builder_.graph().object(*cred_.candidate).truth_id;
    for (const auto& o : scene_.objects) {
      if (o.id == truth && o.decoy) result.stopped_at_false_positive = true;
    }
  }
  result.rejected_candidates = rejected_;
  result.llm_requests = llm_.requests();
  result.explanations = explanations_;
  result.transcript.append(builder_.transcript());
  result.transcript.append(cot_transcript_);
  return result;
}

}  // namespace

EpisodeResult run_episode(const Scene& scene, const EpisodeConfig& config, LlmBackend& llm,
                          VlmBackend* vlm) {
  Agent agent(scene, config, llm, vlm);
  return agent.run();
}

EpisodeResult run_episode(const Scene& scene, const EpisodeConfig& config, LlmBackend& llm) {
  GroundTruthVlm vlm(scene, config.vlm_error_rate, scene.seed);
  return run_episode(scene, config, llm, &vlm);
}

// --- serialization --------------------------------------------------------------------

namespace {

ordered_json step_json(const StepRecord& s) {
  ordered_json j;
  j["step"] = s.step;
  j["action"] = std::string(to_string(s.action));
  j["x"] = s.pose.position.x;
  j["y"] = s.pose.position.y;
  j["heading"] = s.pose.heading_deg;
  j["collision"] = s.collision;
  j["mode"] = s.mode;
  if (s.frontier) j["frontier"] = *s.frontier;
  if (s.candidate) j["candidate"] = *s.candidate;
  if (s.s_k) j["s_k"] = *s.s_k;
  if (!s.verdict.empty()) j["verdict"] = s.verdict;
  if (s.unknown_cells) j["unknown_cells"] = *s.unknown_cells;
  return j;
}

}  // namespace

ordered_json to_json(const EpisodeResult& r, bool include_trace) {
  ordered_json j;
  j["seed"] = r.seed;
  j["goal"] = r.goal;
  j["success"] = r.success;
  j["path_length"] = r.path_length;
  j["optimal_length"] = r.optimal_length;
  j["spl"] = r.spl;
  j["soft_spl"] = r.soft_spl;
  j["d_init"] = r.d_init;
  j["d_final"] = std::isfinite(r.d_final) ? ordered_json(r.d_final) : ordered_json(nullptr);
  j["steps"] = r.steps;
  j["collisions"] = r.collisions;
  j["termination"] = std::string(to_string(r.cause));
  j["stopped_at_false_positive"] = r.stopped_at_false_positive;
  j["rejected_candidates"] = r.rejected_candidates;
  j["llm_requests"] = r.llm_requests;
  j["explanations"] = r.explanations;
  j["transcript"] = r.transcript_ref;
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  if (include_trace) {
    j["trace"] = ordered_json::array();
    for (const auto& s : r.trace) j["trace"].push_back(step_json(s));
  }
  return j;
}

std::string trace_jsonl(const EpisodeResult& r) {
  std::string out;
  for (const auto& s : r.trace) out += step_json(s).dump() + "\n";
  return out;
}

std::vector<StepRecord> parse_trace_jsonl(std::string_view text) {
  std::vector<StepRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw InputError("trace line " + std::to_string(line_no) + " is not a JSON object");
    }
    try {
      StepRecord s;
      s.step = j.at("step").get<int>();
      const auto a = action_from_string(j.at("action").get<std::string>());
      if (!a) throw InputError("trace line " + std::to_string(line_no) + ": unknown action");
      s.action = *a;
      s.pose.position = {j.at("x").get<double>(), j.at("y").get<double>()};
      s.pose.heading_deg = j.at("heading").get<int>();
      s.collision = j.value("collision", false);
      s.mode = j.value("mode", "");
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw InputError("trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// --- benchmark ------------------------------------------------------------------------

Aggregate aggregate(const std::vector<BenchmarkRow>& rows) {
  Aggregate a;
  double succ = 0.0;
  double spl = 0.0;
  double soft = 0.0;
  for (const auto& r : rows) {
    if (!r.result) {
      ++a.failed;
      continue;
    }
    ++a.completed;
    succ += r.result->success ? 1.0 : 0.0;
    spl += r.result->spl;
    soft += r.result->soft_spl;
  }
  if (a.completed > 0) {
    a.sr = succ / a.completed;
    a.mean_spl = spl / a.completed;
    a.mean_soft_spl = soft / a.completed;
  }
  return a;
}

std::string config_fingerprint(const SuiteConfig& suite) {
  ordered_json j;
  j["provider"] = suite.provider;
  j["flags"] = to_json(suite.episode.flags);
  j["goal"] = suite.episode.goal;
  j["vlm_error_rate"] = suite.episode.vlm_error_rate;
  j["reselect_interval"] = suite.episode.reselect_interval;
  j["scene"] = {{"min_rooms", suite.scene.min_rooms},
                {"max_rooms", suite.scene.max_rooms},
                {"min_objects", suite.scene.min_objects},
                {"max_objects", suite.scene.max_objects},
                {"false_positive_rate", suite.scene.false_positive_rate},
                {"decoy_in_start_room", suite.scene.decoy_in_start_room},
                {"relation_density", suite.scene.relation_density},
                {"goal_category", suite.scene.goal_category}};
  j["seeds"] = suite.seeds;
  // FNV-1a over the canonical dump.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

BenchmarkReport run_benchmark(const SuiteConfig& suite, const BackendFactory& factory) {
  BenchmarkReport report;
  report.seeds = suite.seeds;
  report.fingerprint = config_fingerprint(suite);
  report.rows.resize(suite.seeds.size());

  auto run_one = [&](std::size_t i) {
    BenchmarkRow& row = report.rows[i];
    row.seed = suite.seeds[i];
    try {
      const Scene scene = generate_scene(row.seed, suite.scene);
      auto llm = factory(scene);
      row.result = run_episode(scene, suite.episode, *llm);
    } catch (const Error& e) {
      row.error = e.what();
    }
  };

  const int jobs = std::max(1, suite.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < suite.seeds.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < suite.seeds.size(); i = next++) run_one(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  report.summary = aggregate(report.rows);
  return report;
}

namespace {

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json("undefined");
}

}  // namespace

ordered_json to_json(const BenchmarkReport& report) {
  ordered_json j;
  j["fingerprint"] = report.fingerprint;
  j["seeds"] = report.seeds;
  j["completed"] = report.summary.completed;
  j["failed"] = report.summary.failed;
  j["sr"] = optional_number(report.summary.sr);
  j["mean_spl"] = optional_number(report.summary.mean_spl);
  j["mean_soft_spl"] = optional_number(report.summary.mean_soft_spl);
  j["episodes"] = ordered_json::array();
  for (const auto& r : report.rows) {
    if (r.result) {
      j["episodes"].push_back(to_json(*r.result));
    } else {
      j["episodes"].push_back({{"seed", r.seed}, {"error", r.error}});
    }
  }
  return j;
}

std::string format_table(const BenchmarkReport& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << std::left << std::setw(8) << "seed" << std::setw(14) << "goal" << std::setw(9)
     << "success" << std::setw(8) << "steps" << std::setw(9) << "path" << std::setw(9)
     << "optimal" << std::setw(8) << "spl" << std::setw(9) << "soft_spl"
     << "termination\n";
  for (const auto& r : report.rows) {
    os << std::setw(8) << r.seed;
    if (!r.result) {
      os << "error: " << r.error << "\n";
      continue;
    }
    const EpisodeResult& e = *r.result;
    os << std::setw(14) << e.goal << std::setw(9) << (e.success ? "yes" : "no") << std::setw(8)
       << e.steps << std::setw(9) << e.path_length << std::setw(9) << e.optimal_length
       << std::setw(8) << e.spl << std::setw(9) << e.soft_spl << to_string(e.cause) << "\n";
  }
  const Aggregate& a = report.summary;
  auto fmt = [](const std::optional<double>& v) {
    if (!v) return std::string("undefined");
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << *v;
    return s.str();
  };
  os << "episodes " << a.completed << " completed, " << a.failed << " failed\n";
  os << "SR " << fmt(a.sr) << "  SPL " << fmt(a.mean_spl) << "  SoftSPL "
     << fmt(a.mean_soft_spl) << "\n";
  os << "config " << report.fingerprint << "\n";
  return os.str();
}

// --- output -----------------------------------------------------------------------------

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("failed writing " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw InputError("cannot move " + tmp + " to " + path);
  }
}

void render_trace(const Scene& scene, const std::vector<StepRecord>& trace, std::ostream& out) {
  const SceneWorld world(scene);
  const OccupancyGrid& g = world.truth();
  CellBox box = g.known_bounds();
  if (box.empty()) box = {0, 0, g.width() - 1, g.height() - 1};
  const int w = box.width();
  const int h = box.height();
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * 3, 96);
  auto paint = [&](Cell c, std::uint8_t r, std::uint8_t gg, std::uint8_t b) {
    if (!box.contains(c)) return;
    // Row 0 of the image is the top (largest y).
    const std::size_t i =
        (static_cast<std::size_t>(box.y1 - c.y) * w + static_cast<std::size_t>(c.x - box.x0)) * 3;
    px[i] = r;
    px[i + 1] = gg;
    px[i + 2] = b;
  };
  for (int y = box.y0; y <= box.y1; ++y) {
    for (int x = box.x0; x <= box.x1; ++x) {
      const Cell c{x, y};
      switch (g.at(c)) {
        case CellState::kFree: paint(c, 255, 255, 255); break;
        case CellState::kOccupied:
          world.is_wall(c) ? paint(c, 0, 0, 0) : paint(c, 150, 150, 150);
          break;
        case CellState::kUnknown: break;
      }
    }
  }
  for (const auto& o : scene.objects) {
    const bool goal = o.category == scene.goal_category && !o.decoy;
    if (!goal && !o.decoy) continue;
    for (Cell c : world.footprint(o.id)) {
      goal ? paint(c, 0, 170, 0) : paint(c, 230, 140, 0);
    }
  }
  Vec2 prev = scene.start.position;
  for (const auto& s : trace) {
    for (Cell c : line_cells(g.to_cell(prev), g.to_cell(s.pose.position))) paint(c, 220, 0, 0);
    prev = s.pose.position;
  }
  const Cell start = g.to_cell(scene.start.position);
  for (int dy = -2; dy <= 2; ++dy) {
    for (int dx = -2; dx <= 2; ++dx) paint({start.x + dx, start.y + dy}, 0, 0, 220);
  }
  out << "P6\n" << w << " " << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

}  // namespace sgnav
