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

#ifndef SGNAV_STRUCTURED_HPP_
#define SGNAV_STRUCTURED_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace sgnav {

/// Closed relation vocabulary. Labels outside it collapse to kCatchAllRelation.
inline const std::vector<std::string>& relation_vocabulary() {
  static const std::vector<std::string> kVocab = {
      "next to", "above",  "opposite to", "below",
      "inside",  "behind", "in front of"};
  return kVocab;
}
inline constexpr std::string_view kCatchAllRelation = "near";

std::string normalize_relation(std::string_view label);

struct DistanceReason {
  double distance = 0.0;
  std::string reason;
  friend bool operator==(const DistanceReason&, const DistanceReason&) = default;
};

struct Question {
  std::string question;
  friend bool operator==(const Question&, const Question&) = default;
};

struct Answer {
  std::string answer;
  friend bool operator==(const Answer&, const Answer&) = default;
};

using RelationList = std::vector<std::string>;

enum class ResponseShape { kRelationArray, kDistanceReason, kQuestion, kAnswer };

using StructuredValue = std::variant<RelationList, DistanceReason, Question, Answer>;

/// First well-formed JSON object or array embedded in free text.
std::optional<nlohmann::ordered_json> extract_json(std::string_view text);

/// Lenient extraction followed by strict field and type validation.
/// Throws ParseError.
StructuredValue parse_structured(std::string_view response, ResponseShape shape);

RelationList parse_relations(std::string_view response);
DistanceReason parse_distance(std::string_view response);
Question parse_question(std::string_view response);
Answer parse_answer(std::string_view response);

/// Single-line JSON with ", " and ": " separators, the layout used in prompts.
std::string to_inline_json(const nlohmann::ordered_json& value);

std::string render(const StructuredValue& value);

}  // namespace sgnav

#endif  // SGNAV_STRUCTURED_HPP_
