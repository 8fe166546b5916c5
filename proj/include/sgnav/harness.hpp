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

#ifndef SGNAV_HARNESS_HPP_
#define SGNAV_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgnav/llm.hpp"
#include "sgnav/reasoning.hpp"
#include "sgnav/scene_graph.hpp"
#include "sgnav/simulator.hpp"

namespace sgnav {

// --- metrics --------------------------------------------------------------------

/// optimal / max(path, optimal) on success, 0 on failure. A zero optimal
/// length (start already within the success radius) scores 1 on success.
/// Throws InputError on negative lengths.
double compute_spl(bool success, double path, double optimal);

/// max(0, 1 - d_final / d_init) * optimal / max(path, optimal).
/// Throws InputError unless d_init > 0.
double compute_soft_spl(double d_init, double d_final, double path, double optimal);

// --- episodes -------------------------------------------------------------------

struct AblationFlags {
  bool no_reperception = false;
  bool no_scene_graph = false;  // implies no re-perception
  bool no_rooms = false;
  bool no_groups = false;
  EdgeMode edges = EdgeMode::kAll;
  PromptingMode prompting = PromptingMode::kCot;
};

nlohmann::ordered_json to_json(const AblationFlags& flags);

struct EpisodeConfig {
  std::string goal;  // empty: the scene's goal category
  AblationFlags flags;
  SimulatorConfig sim;
  double vlm_error_rate = 0.0;
  int reselect_interval = 10;  // steps between frontier re-scoring
  bool explain = true;
  bool track_unknown = false;  // record the unknown-cell count per step
  int abort_after_failures = 12;  // consecutive provider failures
};

struct StepRecord {
  int step = 0;
  Action action = Action::kStop;
  Pose pose;  // after the action
  bool collision = false;
  std::string mode;  // look, explore, approach, observe, final
  std::optional<std::size_t> frontier;
  std::optional<NodeId> candidate;
  std::optional<double> s_k;
  std::string verdict;
  std::optional<std::size_t> unknown_cells;
};

struct EpisodeResult {
  std::uint64_t seed = 0;
  std::string goal;
  bool success = false;
  double path_length = 0.0;
  double optimal_length = 0.0;
  double spl = 0.0;
  double soft_spl = 0.0;
  double d_init = 0.0;
  double d_final = 0.0;
  int steps = 0;
  int collisions = 0;
  TerminationCause cause = TerminationCause::kNone;
  bool stopped_at_false_positive = false;
  int rejected_candidates = 0;
  int llm_requests = 0;
  std::vector<std::string> explanations;
  std::string transcript_ref;  // file the transcript archive was written to
  std::string diagnostic;      // abort reason, if any
  std::vector<StepRecord> trace;
  LlmTranscript transcript;
};

nlohmann::ordered_json to_json(const EpisodeResult& r, bool include_trace = false);

/// Trace as JSON lines, one step per line.
std::string trace_jsonl(const EpisodeResult& r);
std::vector<StepRecord> parse_trace_jsonl(std::string_view text);

/// Runs one episode to stop, budget exhaustion, exploration exhaustion or
/// abort. `vlm` may be null (short edges are then kept and flagged).
EpisodeResult run_episode(const Scene& scene, const EpisodeConfig& config, LlmBackend& llm,
                          VlmBackend* vlm);

/// Uses GroundTruthVlm with config.vlm_error_rate.
EpisodeResult run_episode(const Scene& scene, const EpisodeConfig& config, LlmBackend& llm);

// --- benchmark ------------------------------------------------------------------

using BackendFactory = std::function<std::unique_ptr<LlmBackend>(const Scene&)>;

struct SuiteConfig {
  std::vector<std::uint64_t> seeds;
  SceneParams scene;
  EpisodeConfig episode;
  std::string provider = "oracle";
  int jobs = 1;
};

struct BenchmarkRow {
  std::uint64_t seed = 0;
  std::optional<EpisodeResult> result;
  std::string error;  // set when the episode could not run
};

struct Aggregate {
  int completed = 0;
  int failed = 0;
  std::optional<double> sr;  // undefined for an empty suite
  std::optional<double> mean_spl;
  std::optional<double> mean_soft_spl;

  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

Aggregate aggregate(const std::vector<BenchmarkRow>& rows);

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
  Aggregate summary;
  std::string fingerprint;
  std::vector<std::uint64_t> seeds;
};

std::string config_fingerprint(const SuiteConfig& suite);

BenchmarkReport run_benchmark(const SuiteConfig& suite, const BackendFactory& factory);

nlohmann::ordered_json to_json(const BenchmarkReport& report);
std::string format_table(const BenchmarkReport& report);

// --- output -----------------------------------------------------------------------

/// Writes via a temporary file and rename.
void write_file_atomic(const std::string& path, std::string_view content);

/// Binary PPM of the true layout with the trajectory drawn on top.
void render_trace(const Scene& scene, const std::vector<StepRecord>& trace, std::ostream& out);

}  // namespace sgnav

#endif  // SGNAV_HARNESS_HPP_
