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

#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "sgnav/errors.hpp"
#include "sgnav/llm.hpp"

namespace sgnav {

namespace {

std::string env_or(const char* key, std::string fallback) {
  const char* v = std::getenv(key);
  return (v != nullptr && *v != '\0') ? std::string(v) : std::move(fallback);
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpChatBackend::Config HttpChatBackend::config_from_env() {
  Config c;
  c.base_url = env_or("SGNAV_LLM_BASE_URL", "https://api.openai.com");
  c.model = env_or("SGNAV_LLM_MODEL", c.model);
  c.api_key = env_or("SGNAV_LLM_API_KEY", "");
  return c;
}

HttpChatBackend::HttpChatBackend(Config config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(std::move(sleeper)) {
  if (!sleeper_) {
    sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

nlohmann::json HttpChatBackend::build_body(const CompletionRequest& request,
                                           const std::string& model) {
  nlohmann::json messages = nlohmann::json::array();
  for (const ChatTurn& t : request.history) {
    messages.push_back({{"role", "user"}, {"content", t.prompt}});
    messages.push_back({{"role", "assistant"}, {"content", t.response}});
  }
  messages.push_back({{"role", "user"}, {"content", request.prompt}});
  nlohmann::json body = {{"model", model},
                         {"messages", std::move(messages)},
                         {"temperature", request.temperature},
                         {"max_tokens", request.max_tokens}};
  if (!request.request_id.empty()) body["user"] = request.request_id;
  return body;
}

std::string HttpChatBackend::extract_content(std::string_view body) {
  const nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw ParseError("completion body is not JSON");
  try {
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("unexpected completion body: ") + e.what());
  }
}

std::string HttpChatBackend::complete(const CompletionRequest& request) {
  const std::string body = build_body(request, config_.model).dump();
  httplib::Client client(config_.base_url);
  if (!client.is_valid()) {
    throw ProviderUnavailable("invalid base url " + config_.base_url);
  }
  const auto secs = static_cast<time_t>(config_.timeout.count());
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= config_.retry.max_retries; ++attempt) {
    if (attempt > 0) sleeper_(config_.retry.backoff(attempt));
    {
      std::lock_guard lock(mu_);
      ++attempts_;
    }
    auto res = client.Post(config_.path, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      try {
        return extract_content(res->body);
      } catch (const ParseError& e) {
        last_error = e.what();
        continue;
      }
    }
    last_error = "HTTP " + std::to_string(res->status);
    if (!retryable_status(res->status)) break;
  }
  throw ProviderUnavailable("chat completion failed: " + last_error);
}

}  // namespace sgnav
