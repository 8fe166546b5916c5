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

#ifndef SGNAV_LLM_HPP_
#define SGNAV_LLM_HPP_

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace sgnav {

struct ChatTurn {
  std::string prompt;
  std::string response;
};

struct CompletionRequest {
  std::string prompt;
  // Earlier turns of the same conversation, oldest first. Sent ahead of the
  // prompt so later stages can refer back without editing their template.
  std::vector<ChatTurn> history;
  double temperature = 0.0;
  int max_tokens = 512;
  std::string request_id;
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  /// Throws ProviderUnavailable when no response can be produced.
  virtual std::string complete(const CompletionRequest& request) = 0;
  virtual std::string name() const = 0;
};

/// Replays (pattern, response) pairs in order. Each prompt must contain the
/// next entry's pattern; anything else throws ScriptMismatch.
class ScriptedBackend : public LlmBackend {
 public:
  struct Entry {
    std::string pattern;
    std::string response;
  };

  explicit ScriptedBackend(std::vector<Entry> entries);

  /// JSON file: {"entries": [{"pattern": ..., "response": ...}, ...]}.
  static std::unique_ptr<ScriptedBackend> from_file(const std::string& path);
  static std::vector<Entry> parse_script(std::string_view text);

  std::string complete(const CompletionRequest& request) override;
  std::string name() const override { return "scripted"; }

  std::size_t consumed() const;
  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
  std::size_t cursor_ = 0;
};

/// Adapts a callable; handy for oracles and fault injection in tests.
class FunctionBackend : public LlmBackend {
 public:
  using Fn = std::function<std::string(const CompletionRequest&)>;
  FunctionBackend(std::string name, Fn fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}
  std::string complete(const CompletionRequest& request) override {
    return fn_(request);
  }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

/// Rough token count: one token per four bytes, rounded up.
std::size_t estimate_tokens(std::string_view text);

/// Decorator that charges simulated latency proportional to token count.
/// Time is accumulated, never slept.
class SimulatedLatencyBackend : public LlmBackend {
 public:
  SimulatedLatencyBackend(LlmBackend& inner, double seconds_per_token,
                          double seconds_per_request = 0.0)
      : inner_(inner),
        seconds_per_token_(seconds_per_token),
        seconds_per_request_(seconds_per_request) {}

  std::string complete(const CompletionRequest& request) override;
  std::string name() const override { return inner_.name() + "+latency"; }

  double simulated_seconds() const;
  std::size_t requests() const;
  std::size_t tokens() const;

 private:
  LlmBackend& inner_;
  double seconds_per_token_;
  double seconds_per_request_;
  mutable std::mutex mu_;
  double seconds_ = 0.0;
  std::size_t requests_ = 0;
  std::size_t tokens_ = 0;
};

struct RetryPolicy {
  int max_retries = 2;
  std::chrono::milliseconds initial_backoff{250};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{4000};

  /// Delay before retry `attempt` (1-based).
  std::chrono::milliseconds backoff(int attempt) const;
};

/// OpenAI-style chat completion client.
class HttpChatBackend : public LlmBackend {
 public:
  struct Config {
    std::string base_url;  // scheme://host[:port]
    std::string path = "/v1/chat/completions";
    std::string model = "gpt-4";
    std::string api_key;
    std::chrono::seconds timeout{60};
    RetryPolicy retry;
  };

  /// Reads SGNAV_LLM_BASE_URL, SGNAV_LLM_MODEL and SGNAV_LLM_API_KEY.
  static Config config_from_env();

  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit HttpChatBackend(Config config, Sleeper sleeper = {});

  std::string complete(const CompletionRequest& request) override;
  std::string name() const override { return "http:" + config_.model; }

  /// Total HTTP attempts made, including retries.
  int attempts() const { return attempts_; }

  static nlohmann::json build_body(const CompletionRequest& request,
                                   const std::string& model);
  static std::string extract_content(std::string_view body);

 private:
  Config config_;
  Sleeper sleeper_;
  std::mutex mu_;
  int attempts_ = 0;
};

enum class Stage {
  kEdgeProposal,
  kObjectDistance,
  kQuestion,
  kAnswer,
  kSubgraphDistance,
  kFlatText,
  kExplanation,
};

std::string_view to_string(Stage s);

struct TranscriptRecord {
  Stage stage = Stage::kEdgeProposal;
  std::string prompt;
  std::string response;
  bool parsed = false;
  int attempt = 0;
  std::string error;
  bool flagged = false;
};

struct LlmTranscript {
  std::vector<TranscriptRecord> records;

  void append(const LlmTranscript& other);
  nlohmann::ordered_json to_json() const;
};

}  // namespace sgnav

#endif  // SGNAV_LLM_HPP_
