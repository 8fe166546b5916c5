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

#ifndef SGNAV_PROMPTS_HPP_
#define SGNAV_PROMPTS_HPP_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace sgnav {

/// Subgraph as it appears inside prompts.
struct SubgraphText {
  std::vector<std::string> nodes;  // central object first
  std::vector<std::string> edges;  // "sofa next to table"
};

nlohmann::ordered_json to_json(const SubgraphText& s);

using CategoryPair = std::pair<std::string, std::string>;

// Markers that precede the slot in each template. Parsers and scripted
// backends key on them.
inline constexpr std::string_view kEdgeMarker = "Now you predict these pairs of objects: ";
inline constexpr std::string_view kObjectDistanceMarker =
    "Now predict the distance and give your reason: {\"object1\"";
inline constexpr std::string_view kQuestionMarker = "Now ask question: ";
inline constexpr std::string_view kAnswerMarker = "Now answer question: ";
inline constexpr std::string_view kSubgraphDistanceMarker =
    "Now predict the distance and give your reason: {\"subgraph\"";
inline constexpr std::string_view kExplanationMarker = "Explain why frontier ";

std::string edge_proposal_prompt(std::span<const CategoryPair> pairs);
std::string object_distance_prompt(std::string_view object, std::string_view goal);
std::string question_prompt(std::string_view object, std::string_view goal);
std::string answer_prompt(const SubgraphText& subgraph, std::string_view question);
std::string subgraph_distance_prompt(const SubgraphText& subgraph, std::string_view goal);

struct ExplanationInput {
  SubgraphText subgraph;
  double distance = 0.0;
  std::string reason;
};

std::string explanation_prompt(std::size_t frontier, std::string_view goal,
                               std::span<const ExplanationInput> analyses);

}  // namespace sgnav

#endif  // SGNAV_PROMPTS_HPP_
