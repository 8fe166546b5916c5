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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "sgnav/errors.hpp"
#include "sgnav/oracles.hpp"

namespace {

using namespace sgnav;

TEST(MetricsTest, SplTable) {
  EXPECT_DOUBLE_EQ(compute_spl(true, 5.0, 5.0), 1.0);
  EXPECT_DOUBLE_EQ(compute_spl(false, 5.0, 5.0), 0.0);
  EXPECT_DOUBLE_EQ(compute_spl(true, 10.0, 5.0), 0.5);
  EXPECT_DOUBLE_EQ(compute_spl(true, 3.0, 0.0), 1.0);
  // A path shorter than the estimate cannot score above 1.
  EXPECT_DOUBLE_EQ(compute_spl(true, 4.0, 5.0), 1.0);
  EXPECT_THROW(compute_spl(true, -1.0, 5.0), InputError);
}

TEST(MetricsTest, SoftSplTable) {
  EXPECT_DOUBLE_EQ(compute_soft_spl(8.0, 0.0, 5.0, 5.0), 1.0);
  EXPECT_DOUBLE_EQ(compute_soft_spl(8.0, 8.0, 5.0, 5.0), 0.0);
  EXPECT_DOUBLE_EQ(compute_soft_spl(8.0, 4.0, 5.0, 5.0), 0.5);
  EXPECT_DOUBLE_EQ(compute_soft_spl(8.0, 12.0, 5.0, 5.0), 0.0);
  EXPECT_DOUBLE_EQ(compute_soft_spl(8.0, 4.0, 10.0, 5.0), 0.25);
  EXPECT_THROW(compute_soft_spl(0.0, 0.0, 1.0, 1.0), InputError);
}

TEST(AggregateTest, EmptySuiteIsUndefined) {
  const Aggregate a = aggregate({});
  EXPECT_EQ(a.completed, 0);
  EXPECT_FALSE(a.sr.has_value());
  EXPECT_FALSE(a.mean_spl.has_value());
  SuiteConfig suite;
  const BenchmarkReport r = run_benchmark(suite, [](const Scene&) {
    return std::make_unique<PriorOracleBackend>();
  });
  EXPECT_TRUE(r.rows.empty());
  EXPECT_FALSE(r.summary.sr.has_value());
  EXPECT_EQ(to_json(r)["summary"]["sr"], nullptr);
  EXPECT_NE(format_table(r).find("undefined"), std::string::npos);
}

TEST(AggregateTest, RecomputableFromRows) {
  std::vector<BenchmarkRow> rows(3);
  rows[0].result = EpisodeResult{};
  rows[0].result->success = true;
  rows[0].result->spl = 0.5;
  rows[0].result->soft_spl = 0.6;
  rows[1].result = EpisodeResult{};
  rows[2].error = "boom";
  const Aggregate a = aggregate(rows);
  EXPECT_EQ(a.completed, 2);
  EXPECT_EQ(a.failed, 1);
  EXPECT_DOUBLE_EQ(*a.sr, 0.5);
  EXPECT_DOUBLE_EQ(*a.mean_spl, 0.25);
  EXPECT_LE(*a.mean_spl, *a.sr);
}

EpisodeResult run_oracle(const Scene& scene, EpisodeConfig cfg = {}) {
  PriorOracleBackend oracle;
  return run_episode(scene, cfg, oracle);
}

TEST(EpisodeTest, SolvesGeneratedScene) {
  const Scene scene = generate_scene(0);
  const EpisodeResult r = run_oracle(scene);
  EXPECT_TRUE(r.success) << r.diagnostic;
  EXPECT_LT(r.steps, kMaxEpisodeSteps);
  EXPECT_EQ(r.cause, TerminationCause::kStopped);
  EXPECT_GT(r.spl, 0.0);
  EXPECT_LE(r.spl, 1.0);
  EXPECT_DOUBLE_EQ(r.spl, compute_spl(r.success, r.path_length, r.optimal_length));
  EXPECT_GT(r.llm_requests, 0);
  EXPECT_EQ(static_cast<int>(r.trace.size()), r.steps);
  EXPECT_FALSE(r.explanations.empty());
}

TEST(EpisodeTest, RepeatRunsAreIdentical) {
  const Scene scene = generate_scene(3);
  const EpisodeResult a = run_oracle(scene);
  const EpisodeResult b = run_oracle(scene);
  EXPECT_EQ(trace_jsonl(a), trace_jsonl(b));
  EXPECT_EQ(to_json(a, true).dump(), to_json(b, true).dump());
  EXPECT_EQ(a.transcript.to_json().dump(), b.transcript.to_json().dump());
}

TEST(EpisodeTest, TraceJsonlRoundTrip) {
  const EpisodeResult r = run_oracle(generate_scene(1));
  const auto parsed = parse_trace_jsonl(trace_jsonl(r));
  ASSERT_EQ(parsed.size(), r.trace.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    EXPECT_EQ(parsed[i].step, r.trace[i].step);
    EXPECT_EQ(parsed[i].action, r.trace[i].action);
    EXPECT_EQ(parsed[i].pose, r.trace[i].pose);
    EXPECT_EQ(parsed[i].mode, r.trace[i].mode);
  }
  EXPECT_THROW(parse_trace_jsonl("{not json}\n"), InputError);
}

TEST(EpisodeTest, UnknownCellsNeverIncrease) {
  EpisodeConfig cfg;
  cfg.track_unknown = true;
  const EpisodeResult r = run_oracle(generate_scene(5), cfg);
  std::size_t prev = SIZE_MAX;
  for (const auto& s : r.trace) {
    ASSERT_TRUE(s.unknown_cells.has_value());
    EXPECT_LE(*s.unknown_cells, prev);
    prev = *s.unknown_cells;
  }
}

TEST(EpisodeTest, NoSceneGraphIssuesNoPrompts) {
  EpisodeConfig cfg;
  cfg.flags.no_scene_graph = true;
  const Scene scene = generate_scene(2);
  const EpisodeResult a = run_oracle(scene, cfg);
  EXPECT_EQ(a.llm_requests, 0);
  EXPECT_TRUE(a.explanations.empty());
  EXPECT_EQ(trace_jsonl(a), trace_jsonl(run_oracle(scene, cfg)));
}

TEST(EpisodeTest, ProviderOutageAborts) {
  FunctionBackend down("down", [](const CompletionRequest&) -> std::string {
    throw ProviderUnavailable("offline");
  });
  const EpisodeResult r = run_episode(generate_scene(0), {}, down);
  EXPECT_EQ(r.cause, TerminationCause::kAborted);
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.spl, 0.0);
  EXPECT_FALSE(r.diagnostic.empty());
}

TEST(BenchmarkTest, ReperceptionAblationDirection) {
  SuiteConfig suite;
  suite.seeds = {0, 1, 2, 3, 4};
  suite.scene.decoy_in_start_room = true;
  auto factory = [](const Scene&) { return std::make_unique<PriorOracleBackend>(); };
  const BenchmarkReport with_rp = run_benchmark(suite, factory);
  suite.episode.flags.no_reperception = true;
  const BenchmarkReport without = run_benchmark(suite, factory);
  ASSERT_TRUE(with_rp.summary.sr && without.summary.sr);
  EXPECT_GT(*with_rp.summary.sr, *without.summary.sr);
  EXPECT_LE(*with_rp.summary.mean_spl, *with_rp.summary.sr);
  EXPECT_NE(with_rp.fingerprint, without.fingerprint);
  int fooled = 0;
  for (const auto& row : without.rows) fooled += row.result->stopped_at_false_positive;
  EXPECT_GE(fooled, 4);
}

TEST(BenchmarkTest, AblationLattice) {
  SuiteConfig suite;
  suite.seeds = {0, 1, 2, 3};
  suite.scene.decoy_in_start_room = true;
  suite.jobs = 4;
  auto factory = [](const Scene&) { return std::make_unique<PriorOracleBackend>(); };
  const double full = *run_benchmark(suite, factory).summary.sr;
  suite.episode.flags.no_reperception = true;
  const double no_rp = *run_benchmark(suite, factory).summary.sr;
  suite.episode.flags.no_scene_graph = true;
  const double no_sg_rp = *run_benchmark(suite, factory).summary.sr;
  EXPECT_GE(full, no_rp);
  EXPECT_GE(no_rp, no_sg_rp);
  EXPECT_GT(full, no_sg_rp);

  // Without the graph the agent still explores to genuine goals.
  SuiteConfig clean;
  clean.seeds = {0, 1};
  clean.episode.flags.no_scene_graph = true;
  EXPECT_GT(*run_benchmark(clean, factory).summary.sr, 0.0);
}

TEST(BenchmarkTest, ParallelMatchesSerial) {
  SuiteConfig suite;
  suite.seeds = {6, 7, 8};
  auto factory = [](const Scene&) { return std::make_unique<PriorOracleBackend>(); };
  const BenchmarkReport serial = run_benchmark(suite, factory);
  suite.jobs = 3;
  const BenchmarkReport parallel = run_benchmark(suite, factory);
  EXPECT_EQ(to_json(serial).dump(), to_json(parallel).dump());
}

TEST(OutputTest, AtomicWriteAndRender) {
  const auto dir = std::filesystem::temp_directory_path() / "sgnav_harness_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.txt").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(content, "second");
  std::filesystem::remove_all(dir);

  const Scene scene = generate_scene(0);
  std::ostringstream os;
  render_trace(scene, {}, os);
  EXPECT_EQ(os.str().rfind("P6\n", 0), 0u);
}

}  // namespace
