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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sgnav/cost_model.hpp"
#include "sgnav/errors.hpp"
#include "sgnav/harness.hpp"
#include "sgnav/oracles.hpp"

namespace {

using namespace sgnav;

struct Options {
  std::string provider = "oracle";
  std::string script;
  std::uint64_t seed = 0;
  std::string scene_file;
  std::string out_dir;
  std::string goal;
  bool no_reperception = false;
  bool no_scene_graph = false;
  bool no_rooms = false;
  bool no_groups = false;
  std::string edges = "all";
  std::string prompting = "cot";
  SceneParams scene;
  double vlm_error_rate = 0.0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void add_provider_flags(CLI::App* app, Options& o) {
  app->add_option("--provider", o.provider, "Language model provider")
      ->check(CLI::IsMember({"scripted", "http", "oracle"}));
  app->add_option("--script", o.script, "Scripted provider responses (JSON)");
}

void add_scene_flags(CLI::App* app, Options& o) {
  app->add_option("--min-rooms", o.scene.min_rooms);
  app->add_option("--max-rooms", o.scene.max_rooms);
  app->add_option("--min-objects", o.scene.min_objects);
  app->add_option("--max-objects", o.scene.max_objects);
  app->add_option("--fp-rate", o.scene.false_positive_rate, "False-positive injection rate");
  app->add_flag("--decoy-in-start-room", o.scene.decoy_in_start_room);
  app->add_option("--relation-density", o.scene.relation_density);
  app->add_option("--scene-goal", o.scene.goal_category, "Goal category for generated scenes");
}

void add_agent_flags(CLI::App* app, Options& o) {
  app->add_option("--goal", o.goal, "Override the scene's goal category");
  app->add_flag("--no-reperception", o.no_reperception);
  app->add_flag("--no-scene-graph", o.no_scene_graph);
  app->add_flag("--no-rooms", o.no_rooms);
  app->add_flag("--no-groups", o.no_groups);
  app->add_option("--edges", o.edges)->check(CLI::IsMember({"none", "short", "long", "all"}));
  app->add_option("--prompting", o.prompting)->check(CLI::IsMember({"cot", "flat-text"}));
  app->add_option("--vlm-error-rate", o.vlm_error_rate);
  app->add_option("--out-dir", o.out_dir, "Directory for reports, traces and renders");
}

EpisodeConfig episode_config(const Options& o) {
  EpisodeConfig c;
  c.goal = o.goal;
  c.flags.no_reperception = o.no_reperception;
  c.flags.no_scene_graph = o.no_scene_graph;
  c.flags.no_rooms = o.no_rooms;
  c.flags.no_groups = o.no_groups;
  c.flags.edges = *edge_mode_from_string(o.edges);
  c.flags.prompting = *prompting_mode_from_string(o.prompting);
  c.vlm_error_rate = o.vlm_error_rate;
  return c;
}

BackendFactory make_factory(const Options& o) {
  if (o.provider == "oracle") {
    return [](const Scene&) { return std::make_unique<PriorOracleBackend>(); };
  }
  if (o.provider == "http") {
    return [](const Scene&) {
      return std::make_unique<HttpChatBackend>(HttpChatBackend::config_from_env());
    };
  }
  if (o.script.empty()) throw InputError("--provider scripted needs --script");
  const std::string path = o.script;
  return [path](const Scene&) -> std::unique_ptr<LlmBackend> {
    return ScriptedBackend::from_file(path);
  };
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

int cmd_run(const Options& o) {
  const Scene scene = o.scene_file.empty() ? generate_scene(o.seed, o.scene)
                                           : read_scene(read_file(o.scene_file));
  auto llm = make_factory(o)(scene);
  EpisodeResult r = run_episode(scene, episode_config(o), *llm);
  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    r.transcript_ref = join(o.out_dir, "transcript.json");
    write_file_atomic(r.transcript_ref, r.transcript.to_json().dump(2) + "\n");
    write_file_atomic(join(o.out_dir, "trace.jsonl"), trace_jsonl(r));
    write_file_atomic(join(o.out_dir, "result.json"), to_json(r).dump(2) + "\n");
    write_file_atomic(join(o.out_dir, "scene.json"), write_scene(scene));
    std::ostringstream img;
    render_trace(scene, r.trace, img);
    write_file_atomic(join(o.out_dir, "trace.ppm"), img.str());
  }
  std::cout << to_json(r).dump(2) << "\n";
  return 0;
}

int cmd_bench(const Options& o, const std::string& seeds, int jobs) {
  SuiteConfig suite;
  const auto colon = seeds.find(':');
  if (colon == std::string::npos) throw InputError("--seeds expects FIRST:END");
  const std::uint64_t first = std::stoull(seeds.substr(0, colon));
  const std::uint64_t end = std::stoull(seeds.substr(colon + 1));
  for (std::uint64_t s = first; s < end; ++s) suite.seeds.push_back(s);
  suite.scene = o.scene;
  suite.episode = episode_config(o);
  suite.provider = o.provider;
  suite.jobs = jobs;
  const BenchmarkReport report = run_benchmark(suite, make_factory(o));
  const std::string table = format_table(report);
  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    write_file_atomic(join(o.out_dir, "report.json"), to_json(report).dump(2) + "\n");
    write_file_atomic(join(o.out_dir, "report.txt"), table);
  }
  std::cout << table;
  return 0;
}

int cmd_verify_bound(double c) {
  const auto start = std::chrono::steady_clock::now();
  const CostModel model;
  const auto violations = bound_violations(model, c);
  const double coeff = reported_coefficient(5, model.alpha(), model.exponent);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "coefficient (m=5, alpha=" << model.alpha() << ", r=" << model.exponent
            << "): " << coeff << "\n";
  std::cout << "sweep m in [1,5], n in [1,100]: " << violations.size()
            << " points with t_our/t_naive >= " << c << "/(m+n)\n";
  if (!violations.empty()) {
    const auto& v = violations.front();
    std::cout << "first: m=" << v.m << " n=" << v.n << " ratio=" << v.ratio
              << " bound=" << v.bound << "\n";
  }
  std::cout << "elapsed " << secs << " s\n";
  return violations.empty() ? 0 : 1;
}

int cmd_render(const std::string& scene_file, const std::string& trace_file,
               const std::string& out) {
  const Scene scene = read_scene(read_file(scene_file));
  const auto trace = parse_trace_jsonl(read_file(trace_file));
  std::ostringstream img;
  render_trace(scene, trace, img);
  write_file_atomic(out, img.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scene-graph object navigation agent and benchmark harness"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Run a single episode");
  run->add_option("--scene", o.scene_file, "Scene JSON file");
  run->add_option("--seed", o.seed, "Seed for a generated scene");
  add_provider_flags(run, o);
  add_scene_flags(run, o);
  add_agent_flags(run, o);

  std::string seeds = "0:20";
  int jobs = 1;
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
  bench->add_option("--seeds", seeds, "Seed range FIRST:END");
  bench->add_option("--jobs", jobs, "Episodes run concurrently");
  add_provider_flags(bench, o);
  add_scene_flags(bench, o);
  add_agent_flags(bench, o);

  std::string out_file;
  auto* gen = app.add_subcommand("gen-scene", "Generate a scene file");
  gen->add_option("--seed", o.seed);
  gen->add_option("--out", out_file, "Output path (stdout when omitted)");
  add_scene_flags(gen, o);

  double c = 5.49;
  auto* verify = app.add_subcommand("verify-bound", "Sweep the batched-prompt cost bound");
  verify->add_option("--c", c, "Bound constant");

  std::string trace_file;
  auto* render = app.add_subcommand("render-trace", "Render a trace over its scene");
  render->add_option("--scene", o.scene_file)->required();
  render->add_option("--trace", trace_file)->required();
  render->add_option("--out", out_file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(o);
    if (*bench) return cmd_bench(o, seeds, jobs);
    if (*gen) {
      const std::string text = write_scene(generate_scene(o.seed, o.scene));
      if (out_file.empty()) {
        std::cout << text;
      } else {
        write_file_atomic(out_file, text);
      }
      return 0;
    }
    if (*verify) return cmd_verify_bound(c);
    if (*render) return cmd_render(o.scene_file, trace_file, out_file);
  } catch (const sgnav::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
