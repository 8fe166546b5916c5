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

#include "sgnav/llm.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sgnav/errors.hpp"

namespace sgnav {

ScriptedBackend::ScriptedBackend(std::vector<Entry> entries)
    : entries_(std::move(entries)) {}

std::vector<ScriptedBackend::Entry> ScriptedBackend::parse_script(
    std::string_view text) {
  const nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("entries") ||
      !j["entries"].is_array()) {
    throw InputError("script must be an object with an \"entries\" array");
  }
  std::vector<Entry> out;
  for (const auto& e : j["entries"]) {
    if (!e.is_object() || !e.contains("pattern") || !e.contains("response") ||
        !e["pattern"].is_string() || !e["response"].is_string()) {
      throw InputError("script entry needs string \"pattern\" and \"response\"");
    }
    out.push_back({e["pattern"].get<std::string>(), e["response"].get<std::string>()});
  }
  return out;
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open script " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return std::make_unique<ScriptedBackend>(parse_script(ss.str()));
}

std::string ScriptedBackend::complete(const CompletionRequest& request) {
  std::lock_guard lock(mu_);
  if (cursor_ >= entries_.size()) {
    throw ScriptMismatch("script exhausted after " + std::to_string(cursor_) +
                         " responses");
  }
  const Entry& e = entries_[cursor_];
  if (request.prompt.find(e.pattern) == std::string::npos) {
    throw ScriptMismatch("entry " + std::to_string(cursor_) +
                         " expects a prompt containing \"" + e.pattern + "\"");
  }
  ++cursor_;
  return e.response;
}

std::size_t ScriptedBackend::consumed() const {
  std::lock_guard lock(mu_);
  return cursor_;
}

std::size_t ScriptedBackend::remaining() const {
  std::lock_guard lock(mu_);
  return entries_.size() - cursor_;
}

std::size_t estimate_tokens(std::string_view text) {
  return (text.size() + 3) / 4;
}

std::string SimulatedLatencyBackend::complete(const CompletionRequest& request) {
  std::string response = inner_.complete(request);
  std::size_t tokens = estimate_tokens(request.prompt) + estimate_tokens(response);
  for (const ChatTurn& t : request.history) {
    tokens += estimate_tokens(t.prompt) + estimate_tokens(t.response);
  }
  std::lock_guard lock(mu_);
  ++requests_;
  tokens_ += tokens;
  seconds_ += seconds_per_request_ + seconds_per_token_ * static_cast<double>(tokens);
  return response;
}

double SimulatedLatencyBackend::simulated_seconds() const {
  std::lock_guard lock(mu_);
  return seconds_;
}

std::size_t SimulatedLatencyBackend::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::size_t SimulatedLatencyBackend::tokens() const {
  std::lock_guard lock(mu_);
  return tokens_;
}

std::chrono::milliseconds RetryPolicy::backoff(int attempt) const {
  double ms = static_cast<double>(initial_backoff.count());
  for (int i = 1; i < attempt; ++i) ms *= multiplier;
  ms = std::min(ms, static_cast<double>(max_backoff.count()));
  return std::chrono::milliseconds(static_cast<long long>(ms));
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::kEdgeProposal: return "edge_proposal";
    case Stage::kObjectDistance: return "object_distance";
    case Stage::kQuestion: return "question";
    case Stage::kAnswer: return "answer";
    case Stage::kSubgraphDistance: return "subgraph_distance";
    case Stage::kFlatText: return "flat_text";
    case Stage::kExplanation: return "explanation";
  }
  return "unknown";
}

void LlmTranscript::append(const LlmTranscript& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
}

nlohmann::ordered_json LlmTranscript::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const TranscriptRecord& r : records) {
    nlohmann::ordered_json o;
    o["stage"] = std::string(to_string(r.stage));
    o["attempt"] = r.attempt;
    o["prompt"] = r.prompt;
    o["response"] = r.response;
    o["parsed"] = r.parsed;
    if (!r.error.empty()) o["error"] = r.error;
    if (r.flagged) o["flagged"] = true;
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace sgnav
