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

#include "sgnav/prompts.hpp"

#include "sgnav/structured.hpp"

namespace sgnav {

namespace {

using ojson = nlohmann::ordered_json;

std::string join_lines(std::initializer_list<std::string_view> lines) {
  std::string out;
  bool first = true;
  for (std::string_view l : lines) {
    if (!first) out += '\n';
    first = false;
    out += l;
  }
  return out;
}

}  // namespace

ojson to_json(const SubgraphText& s) {
  ojson o;
  o["nodes"] = s.nodes;
  o["edges"] = s.edges;
  return o;
}

std::string edge_proposal_prompt(std::span<const CategoryPair> pairs) {
  ojson slot = ojson::array();
  for (const auto& [a, b] : pairs) slot.push_back({{"object1", a}, {"object2", b}});
  const std::string head = join_lines({
      "You are an AI assistant with commonsense and strong ability to infer the "
      "spatial relationships in an indoor scene.",
      "You need to provide the possible spatial relationships between several "
      "pairs of objects. Relationships include [\"next to\", \"above\", "
      "\"opposite to\", \"below\", \"inside\", \"behind\", \"in front of\", ...].",
      "All the pairs of objects are provided in JSON format, and you should also "
      "response in JSON format. Here are 2 examples:",
      "1.",
      "Input:",
      "[{\"object1\": \"chair\", \"object2\": \"table\"}, {\"object1\": "
      "\"monitor\", \"object2\": \"desk\"}]",
      "Response:",
      "[{\"relationships\": \"next to\"}, {\"relationships\": \"above\"}]",
      "2.",
      "Input:",
      "[{\"object1\": \"sofa\", \"object2\": \"TV\"}, {\"object1\": \"plant\", "
      "\"object2\": \"chair\"}]",
      "Response:",
      "[{\"relationships\": \"opposite to\"}, {\"relationships\": \"behind\"}]",
      "",
  });
  return head + std::string(kEdgeMarker) + to_inline_json(slot);
}

std::string object_distance_prompt(std::string_view object, std::string_view goal) {
  ojson slot;
  slot["object1"] = object;
  slot["object2"] = goal;
  return join_lines({
             "You are an AI assistant with commonsense and strong ability to infer "
             "the distance between two objects in an indoor scene.",
             "You need to predict the most likely distance of two objects in a room. "
             "You need to answer the distance in meters and give your reason. Here "
             "is the JSON format:",
             "Input:",
             "{\"object1\": \"table\", \"object2\": \"chair\"}",
             "Response:",
             "{\"distance\": 0.5, \"reason\": \"Because there is always a chair "
             "next to the table.\"}",
             "",
         }) +
         "Now predict the distance and give your reason: " + to_inline_json(slot);
}

std::string question_prompt(std::string_view object, std::string_view goal) {
  ojson slot;
  slot["object"] = object;
  slot["goal"] = goal;
  return join_lines({
             "You are an AI assistant with commonsense and strong ability to infer "
             "the spatial relationships in an indoor scene.",
             "But you have insufficient information. You need to ask a question "
             "about the spatial relationship between the object and the goal in "
             "the following JSON format:",
             "Input:",
             "{\"object\": \"sofa\", \"goal\": \"TV\"}",
             "Response:",
             "{\"question\": \"Is there a table next to the sofa?\"}",
             "",
         }) +
         std::string(kQuestionMarker) + to_inline_json(slot);
}

std::string answer_prompt(const SubgraphText& subgraph, std::string_view question) {
  ojson slot;
  slot["subgraph"] = to_json(subgraph);
  slot["question"] = question;
  return join_lines({
             "You are an AI assistant with commonsense and strong ability to answer "
             "question about the objects in an indoor scene.",
             "Given a graph scene of the scene, you need to answer the question in "
             "the following JSON format:",
             "Input:",
             "{\"subgraph\": {\"nodes\": [\"sofa\", \"table\", ...], \"edges\": "
             "[\"sofa next to table\", ...]}, \"question\": \"Is there a table next "
             "to the sofa?\"}",
             "Response:",
             "{\"answer\": \"Yes\"}",
             "",
         }) +
         std::string(kAnswerMarker) + to_inline_json(slot);
}

std::string subgraph_distance_prompt(const SubgraphText& subgraph,
                                     std::string_view goal) {
  ojson slot;
  slot["subgraph"] = to_json(subgraph);
  slot["goal"] = goal;
  return join_lines({
             "You are an AI assistant with commonsense and strong ability to infer "
             "the distance between a subgraph and a goal in an indoor scene.",
             "You need to predict the most likely distance of a subgraph and a goal "
             "in a room. You need to answer the distance in meters and give your "
             "reason. Here is the JSON format:",
             "Input:",
             "{\"subgraph\": {\"nodes\": [\"sofa\", \"table\", ...], \"edges\": "
             "[\"sofa next to table\", ...]}, \"goal\": \"TV\"}",
             "Response:",
             "{\"distance\": 2, \"reason\": \"Because TV and sofa are on both sides "
             "of table.\"}",
             "",
         }) +
         "Now predict the distance and give your reason: " + to_inline_json(slot);
}

std::string explanation_prompt(std::size_t frontier, std::string_view goal,
                               std::span<const ExplanationInput> analyses) {
  ojson slot = ojson::array();
  for (const ExplanationInput& a : analyses) {
    ojson o;
    o["subgraph"] = to_json(a.subgraph);
    o["distance"] = a.distance;
    o["reason"] = a.reason;
    slot.push_back(std::move(o));
  }
  std::string out = join_lines({
      "You are an AI assistant that explains navigation decisions in an indoor "
      "scene.",
      "The agent is searching for a goal object and has chosen a frontier to "
      "explore. The subgraphs nearest to that frontier were analysed as follows:",
      "",
  });
  out += to_inline_json(slot);
  out += '\n';
  out += std::string(kExplanationMarker) + std::to_string(frontier) +
         " is the most promising place to find " + std::string(goal) +
         ", in at most three sentences.";
  return out;
}

}  // namespace sgnav
