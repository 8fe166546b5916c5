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

#ifndef SGNAV_REASONING_HPP_
#define SGNAV_REASONING_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgnav/geometry.hpp"
#include "sgnav/llm.hpp"
#include "sgnav/mapping.hpp"
#include "sgnav/prompts.hpp"
#include "sgnav/scene_graph.hpp"

namespace sgnav {

inline constexpr double kMinPredictedDistance = 0.1;
inline constexpr double kMinFrontierDistance = 0.5;
inline constexpr double kFallbackDistance = 5.0;
inline constexpr double kDefaultThreshold = 0.8;  // S_thres
inline constexpr int kDefaultMaxObservations = 10;  // N_max

enum class PromptingMode { kCot, kFlatText };

std::string_view to_string(PromptingMode m);
std::optional<PromptingMode> prompting_mode_from_string(std::string_view s);

struct CotOptions {
  int max_retries = 2;
  PromptingMode mode = PromptingMode::kCot;
  double fallback_distance = kFallbackDistance;
};

struct CotResult {
  double distance = 0.0;
  std::string reason;
  LlmTranscript transcript;
  bool flagged = false;        // neither Step 4 nor Step 1 produced a distance
  bool used_fallback = false;  // Step-1 distance stood in for Step 4
};

/// The four-stage chain: object-goal distance, question, answer from the
/// subgraph, subgraph-goal distance. Step 4 is sent with the earlier turns as
/// conversation history. In flat-text mode only the subgraph distance
/// prompt is issued.
CotResult cot_predict_distance(const SubgraphText& subgraph, std::string_view goal,
                               LlmBackend& llm, const CotOptions& options = {});

/// 1 / max(distance, 0.1). Throws InputError on negative or NaN input.
double subgraph_probability(double distance);

struct SubgraphScore {
  NodeId subgraph = 0;  // central object node
  double predicted_distance = 0.0;
  double p_sub = 0.0;
  std::string reason;
  SubgraphText text;
  LlmTranscript transcript;
  std::uint64_t graph_revision = 0;
  bool flagged = false;
};

struct FrontierTerm {
  NodeId subgraph = 0;
  double distance = 0.0;  // clamped D_ij
  double value = 0.0;     // P_sub / D_ij
};

struct FrontierScore {
  std::size_t frontier = 0;
  double score = 0.0;
  std::vector<FrontierTerm> terms;
};

/// Frontier score = sum_j P_sub_j / max(|frontier - center_j|, 0.5).
/// `centers[j]` is the BEV position of scores[j]'s central node.
std::vector<FrontierScore> score_frontiers(std::span<const Vec2> frontier_centroids,
                                           std::span<const SubgraphScore> scores,
                                           std::span<const Vec2> centers);

std::vector<FrontierScore> score_frontiers(std::span<const Frontier> frontiers,
                                           std::span<const SubgraphScore> scores,
                                           std::span<const Vec2> centers);

/// Argmax; ties by smaller agent distance, then smaller index. Returns
/// nullopt when there are no frontiers (exploration exhausted).
/// agent_distance[i] belongs to frontier scores[i].frontier; empty means all
/// equal.
std::optional<std::size_t> select_frontier(std::span<const FrontierScore> scores,
                                           std::span<const double> agent_distance = {});

struct Explanation {
  std::string text;
  std::vector<NodeId> cited;
  bool fallback = false;
  LlmTranscript transcript;
};

/// Summarizes the (up to) three subgraphs nearest the selected frontier.
/// `selected` indexes into `scores`.
Explanation explain_decision(std::size_t selected, std::span<const FrontierScore> scores,
                             const std::map<NodeId, SubgraphScore>& subgraphs,
                             std::string_view goal, LlmBackend& llm);

struct CredibilityState {
  std::optional<NodeId> candidate;
  double cumulative = 0.0;
  int observations = 0;
  double s_thres = kDefaultThreshold;
  int n_max = kDefaultMaxObservations;
  std::vector<double> history;  // S_k per observation
};

struct CredibilityUpdate {
  CredibilityState state;
  double s_k = 0.0;
  bool overflow = false;
};

/// S_k = c_k * sum_j P_sub_j / max(|center_j - candidate|, 0.5).
double credibility_score(double c_k, std::span<const double> p_sub,
                         std::span<const Vec2> centers, Vec2 candidate);

/// Throws InputError when c_k is outside [0, 1].
CredibilityUpdate credibility_step(const CredibilityState& state, double c_k,
                                   std::span<const SubgraphScore> scores,
                                   std::span<const Vec2> centers, Vec2 candidate_pos);

enum class ReperceptionVerdict { kAccept, kContinue, kReject };

std::string_view to_string(ReperceptionVerdict v);

/// Accept when the running sum first reaches s_thres at an observation count
/// strictly below n_max; reject once n_max observations pass without that.
ReperceptionVerdict reperception_verdict(const CredibilityState& state);

/// CoT results keyed by subgraph content and goal, so unchanged subgraphs are
/// not re-prompted when unrelated parts of the graph change.
class ScoreCache {
 public:
  static std::string key(const SubgraphText& text, std::string_view goal, PromptingMode mode);

  const CotResult* find(const std::string& key) const;
  void store(const std::string& key, CotResult result);
  std::size_t size() const { return entries_.size(); }
  std::size_t hits() const { return hits_; }

 private:
  std::map<std::string, CotResult> entries_;
  mutable std::size_t hits_ = 0;
};

}  // namespace sgnav

#endif  // SGNAV_REASONING_HPP_
