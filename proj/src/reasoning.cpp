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

#include "sgnav/reasoning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgnav/errors.hpp"
#include "sgnav/structured.hpp"

namespace sgnav {

namespace {

struct StageOutcome {
  std::optional<StructuredValue> value;
  std::string response;
};

// Issues one stage with retries; every attempt lands in the transcript.
StageOutcome run_stage(LlmBackend& llm, Stage stage, const CompletionRequest& req,
                       ResponseShape shape, int max_retries, LlmTranscript& transcript) {
  StageOutcome out;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    TranscriptRecord rec;
    rec.stage = stage;
    rec.prompt = req.prompt;
    rec.attempt = attempt;
    try {
      rec.response = llm.complete(req);
      StructuredValue v = parse_structured(rec.response, shape);
      if (const auto* d = std::get_if<DistanceReason>(&v)) {
        if (!(d->distance >= 0.0) || !std::isfinite(d->distance)) {
          throw ParseError("distance must be a non-negative number");
        }
      }
      rec.parsed = true;
      out.value = std::move(v);
      out.response = rec.response;
      transcript.records.push_back(std::move(rec));
      return out;
    } catch (const Error& e) {
      rec.error = e.what();
      transcript.records.push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(PromptingMode m) {
  return m == PromptingMode::kCot ? "cot" : "flat-text";
}

std::optional<PromptingMode> prompting_mode_from_string(std::string_view s) {
  if (s == "cot") return PromptingMode::kCot;
  if (s == "flat-text" || s == "flat") return PromptingMode::kFlatText;
  return std::nullopt;
}

CotResult cot_predict_distance(const SubgraphText& subgraph, std::string_view goal,
                               LlmBackend& llm, const CotOptions& options) {
  if (subgraph.nodes.empty()) throw InputError("subgraph has no central node");
  CotResult result;
  const std::string& object = subgraph.nodes.front();

  std::optional<DistanceReason> step1;
  std::vector<ChatTurn> history;
  if (options.mode == PromptingMode::kCot) {
    CompletionRequest r1;
    r1.prompt = object_distance_prompt(object, goal);
    auto s1 = run_stage(llm, Stage::kObjectDistance, r1, ResponseShape::kDistanceReason,
                        options.max_retries, result.transcript);
    if (s1.value) {
      step1 = std::get<DistanceReason>(*s1.value);
      history.push_back({r1.prompt, s1.response});
    }

    CompletionRequest r2;
    r2.prompt = question_prompt(object, goal);
    r2.history = history;
    auto s2 = run_stage(llm, Stage::kQuestion, r2, ResponseShape::kQuestion,
                        options.max_retries, result.transcript);
    if (s2.value) {
      history.push_back({r2.prompt, s2.response});
      CompletionRequest r3;
      r3.prompt = answer_prompt(subgraph, std::get<Question>(*s2.value).question);
      r3.history = history;
      auto s3 = run_stage(llm, Stage::kAnswer, r3, ResponseShape::kAnswer,
                          options.max_retries, result.transcript);
      if (s3.value) history.push_back({r3.prompt, s3.response});
    }
  }

  CompletionRequest r4;
  r4.prompt = subgraph_distance_prompt(subgraph, goal);
  r4.history = history;
  const Stage s4_stage =
      options.mode == PromptingMode::kCot ? Stage::kSubgraphDistance : Stage::kFlatText;
  auto s4 = run_stage(llm, s4_stage, r4, ResponseShape::kDistanceReason, options.max_retries,
                      result.transcript);
  if (s4.value) {
    const auto& d = std::get<DistanceReason>(*s4.value);
    result.distance = d.distance;
    result.reason = d.reason;
  } else if (step1) {
    result.distance = step1->distance;
    result.reason = step1->reason;
    result.used_fallback = true;
  } else {
    result.distance = options.fallback_distance;
    result.reason = "no usable response; default distance";
    result.flagged = true;
    if (!result.transcript.records.empty()) result.transcript.records.back().flagged = true;
  }
  return result;
}

double subgraph_probability(double distance) {
  if (!(distance >= 0.0)) throw InputError("predicted distance must be non-negative");
  return 1.0 / std::max(distance, kMinPredictedDistance);
}

std::vector<FrontierScore> score_frontiers(std::span<const Vec2> frontier_centroids,
                                           std::span<const SubgraphScore> scores,
                                           std::span<const Vec2> centers) {
  if (centers.size() != scores.size()) {
    throw InputError("score_frontiers needs one center per subgraph score");
  }
  std::vector<FrontierScore> out;
  out.reserve(frontier_centroids.size());
  for (std::size_t i = 0; i < frontier_centroids.size(); ++i) {
    FrontierScore f;
    f.frontier = i;
    f.terms.reserve(scores.size());
    for (std::size_t j = 0; j < scores.size(); ++j) {
      FrontierTerm t;
      t.subgraph = scores[j].subgraph;
      t.distance = std::max(distance(frontier_centroids[i], centers[j]), kMinFrontierDistance);
      t.value = scores[j].p_sub / t.distance;
      f.score += t.value;
      f.terms.push_back(t);
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<FrontierScore> score_frontiers(std::span<const Frontier> frontiers,
                                           std::span<const SubgraphScore> scores,
                                           std::span<const Vec2> centers) {
  std::vector<Vec2> c;
  c.reserve(frontiers.size());
  for (const Frontier& f : frontiers) c.push_back(f.centroid);
  return score_frontiers(std::span<const Vec2>(c), scores, centers);
}

std::optional<std::size_t> select_frontier(std::span<const FrontierScore> scores,
                                           std::span<const double> agent_distance) {
  if (scores.empty()) return std::nullopt;
  auto dist = [&](std::size_t i) {
    return agent_distance.empty() ? 0.0 : agent_distance[i];
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const auto& a = scores[i];
    const auto& b = scores[best];
    if (a.score > b.score) {
      best = i;
    } else if (a.score == b.score) {
      if (dist(i) < dist(best) || (dist(i) == dist(best) && a.frontier < b.frontier)) {
        best = i;
      }
    }
  }
  return best;
}

Explanation explain_decision(std::size_t selected, std::span<const FrontierScore> scores,
                             const std::map<NodeId, SubgraphScore>& subgraphs,
                             std::string_view goal, LlmBackend& llm) {
  if (selected >= scores.size()) throw InputError("selected frontier out of range");
  std::vector<FrontierTerm> terms = scores[selected].terms;
  std::stable_sort(terms.begin(), terms.end(), [](const FrontierTerm& a, const FrontierTerm& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.subgraph < b.subgraph;
  });
  if (terms.size() > 3) terms.resize(3);

  Explanation ex;
  std::vector<ExplanationInput> inputs;
  for (const FrontierTerm& t : terms) {
    ex.cited.push_back(t.subgraph);
    auto it = subgraphs.find(t.subgraph);
    if (it == subgraphs.end()) continue;
    inputs.push_back({it->second.text, it->second.predicted_distance, it->second.reason});
  }

  CompletionRequest req;
  req.prompt = explanation_prompt(scores[selected].frontier, goal, inputs);
  TranscriptRecord rec;
  rec.stage = Stage::kExplanation;
  rec.prompt = req.prompt;
  try {
    rec.response = llm.complete(req);
    rec.parsed = true;
    ex.text = rec.response;
  } catch (const Error& e) {
    rec.error = e.what();
    ex.fallback = true;
    for (const ExplanationInput& in : inputs) {
      if (!ex.text.empty()) ex.text += ' ';
      ex.text += in.reason;
    }
  }
  ex.transcript.records.push_back(std::move(rec));
  return ex;
}

double credibility_score(double c_k, std::span<const double> p_sub,
                         std::span<const Vec2> centers, Vec2 candidate) {
  double sum = 0.0;
  for (std::size_t j = 0; j < p_sub.size(); ++j) {
    sum += p_sub[j] / std::max(distance(centers[j], candidate), kMinFrontierDistance);
  }
  return c_k * sum;
}

CredibilityUpdate credibility_step(const CredibilityState& state, double c_k,
                                   std::span<const SubgraphScore> scores,
                                   std::span<const Vec2> centers, Vec2 candidate_pos) {
  if (!(c_k >= 0.0 && c_k <= 1.0)) throw InputError("confidence must lie in [0, 1]");
  if (centers.size() != scores.size()) {
    throw InputError("credibility_step needs one center per subgraph score");
  }
  CredibilityUpdate u{state, 0.0, false};
  if (state.observations >= state.n_max) {
    u.overflow = true;
    return u;
  }
  std::vector<double> p(scores.size());
  for (std::size_t j = 0; j < scores.size(); ++j) p[j] = scores[j].p_sub;
  u.s_k = credibility_score(c_k, p, centers, candidate_pos);
  u.state.cumulative += u.s_k;
  u.state.observations += 1;
  u.state.history.push_back(u.s_k);
  return u;
}

std::string_view to_string(ReperceptionVerdict v) {
  switch (v) {
    case ReperceptionVerdict::kAccept: return "accept";
    case ReperceptionVerdict::kContinue: return "continue";
    case ReperceptionVerdict::kReject: return "reject";
  }
  return "continue";
}

ReperceptionVerdict reperception_verdict(const CredibilityState& state) {
  double sum = 0.0;
  for (std::size_t i = 0; i < state.history.size(); ++i) {
    sum += state.history[i];
    const int n = static_cast<int>(i) + 1;
    if (sum >= state.s_thres) {
      return n < state.n_max ? ReperceptionVerdict::kAccept : ReperceptionVerdict::kReject;
    }
  }
  return state.observations >= state.n_max ? ReperceptionVerdict::kReject
                                           : ReperceptionVerdict::kContinue;
}

std::string ScoreCache::key(const SubgraphText& text, std::string_view goal,
                            PromptingMode mode) {
  nlohmann::ordered_json j;
  j["subgraph"] = to_json(text);
  j["goal"] = goal;
  j["mode"] = std::string(to_string(mode));
  return j.dump();
}

const CotResult* ScoreCache::find(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  ++hits_;
  return &it->second;
}

void ScoreCache::store(const std::string& key, CotResult result) {
  entries_.insert_or_assign(key, std::move(result));
}

}  // namespace sgnav
