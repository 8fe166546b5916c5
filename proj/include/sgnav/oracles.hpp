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

#ifndef SGNAV_ORACLES_HPP_
#define SGNAV_ORACLES_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "sgnav/llm.hpp"
#include "sgnav/scene_graph.hpp"
#include "sgnav/simulator.hpp"

namespace sgnav {

/// Offline stand-in for a commonsense LLM. Answers every prompt template from
/// co-occurrence priors derived from the room catalog; it never sees a scene.
class PriorOracleBackend : public LlmBackend {
 public:
  struct Priors {
    double same_cluster = 1.0;
    double hosting_room = 1.5;  // node is a room type that hosts the goal
    double same_room_type = 2.5;
    double unrelated = 8.0;
    // Categories found in this many room types or more say nothing about
    // where the goal is, unless they share its cluster.
    int generic_room_types = 3;
  };

  PriorOracleBackend() = default;
  explicit PriorOracleBackend(Priors priors) : priors_(priors) {}

  std::string complete(const CompletionRequest& request) override;
  std::string name() const override { return "oracle"; }

  /// Prior object-goal distance in meters.
  double prior_distance(std::string_view category, std::string_view goal) const;
  std::string relation_for(std::string_view a, std::string_view b) const;
  /// A category commonly placed next to the goal, or empty.
  std::string partner_of(std::string_view goal) const;

 private:
  Priors priors_;
};

/// Answers relation queries from scene geometry. Each answer is flipped with
/// probability error_rate, deterministically per (seed, frame, pair).
class GroundTruthVlm : public VlmBackend {
 public:
  GroundTruthVlm(const Scene& scene, double error_rate = 0.0, std::uint64_t seed = 0)
      : scene_(scene), error_rate_(error_rate), seed_(seed) {}

  bool affirm(const VlmQuery& query) override;

  void set_available(bool available) { available_ = available; }
  int queries() const { return queries_; }

 private:
  const Scene& scene_;
  double error_rate_;
  std::uint64_t seed_;
  bool available_ = true;
  int queries_ = 0;
};

}  // namespace sgnav

#endif  // SGNAV_ORACLES_HPP_
