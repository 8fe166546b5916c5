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

#include "sgnav/oracles.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "sgnav/errors.hpp"
#include "sgnav/prompts.hpp"
#include "sgnav/random.hpp"
#include "sgnav/structured.hpp"

namespace sgnav {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> cluster_categories(const ClusterTemplate& c) {
  std::vector<std::string> out{c.anchor};
  for (const auto& s : c.satellites) out.push_back(s.category);
  return out;
}

bool in_cluster(const ClusterTemplate& c, const std::string& cat) {
  const auto members = cluster_categories(c);
  return std::find(members.begin(), members.end(), cat) != members.end();
}

bool in_room(const RoomTemplate& t, const std::string& cat) {
  return std::any_of(t.clusters.begin(), t.clusters.end(),
                     [&](const ClusterTemplate& c) { return in_cluster(c, cat); });
}

const RoomTemplate* room_type(const std::string& name) {
  for (const auto& t : room_templates()) {
    if (t.room_type == name) return &t;
  }
  return nullptr;
}

std::vector<std::string> split_label(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '+') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// JSON slot that follows the last occurrence of `marker`.
std::optional<json> slot_after(std::string_view prompt, std::string_view marker) {
  const auto pos = prompt.rfind(marker);
  if (pos == std::string_view::npos) return std::nullopt;
  std::size_t start = pos + marker.size();
  const auto brace = marker.find_first_of("{[");
  if (brace != std::string_view::npos) start = pos + brace;
  json j = json::parse(prompt.substr(start), nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

std::string format_distance(double d) {
  std::ostringstream os;
  os << std::round(d * 10.0) / 10.0;
  return os.str();
}

}  // namespace

double PriorOracleBackend::prior_distance(std::string_view category,
                                          std::string_view goal) const {
  const std::string cat = lower(category);
  const std::string g = lower(goal);
  if (cat.find('+') != std::string::npos) {
    double best = priors_.unrelated;
    for (const auto& part : split_label(cat)) best = std::min(best, prior_distance(part, g));
    return best;
  }
  if (cat == g) return 0.0;
  if (const RoomTemplate* t = room_type(cat)) {
    return in_room(*t, g) ? priors_.hosting_room : priors_.unrelated;
  }
  bool shared_room = false;
  int hosts = 0;
  for (const auto& t : room_templates()) {
    for (const auto& c : t.clusters) {
      if (in_cluster(c, cat) && in_cluster(c, g)) return priors_.same_cluster;
    }
    shared_room |= in_room(t, cat) && in_room(t, g);
    hosts += in_room(t, cat) ? 1 : 0;
  }
  if (hosts >= priors_.generic_room_types) return priors_.unrelated;
  return shared_room ? priors_.same_room_type : priors_.unrelated;
}

std::string PriorOracleBackend::relation_for(std::string_view a, std::string_view b) const {
  const std::string x = lower(a);
  const std::string y = lower(b);
  if ((x == "sofa" && y == "tv") || (x == "tv" && y == "sofa")) return "opposite to";
  for (const auto& t : room_templates()) {
    for (const auto& c : t.clusters) {
      if (in_cluster(c, x) && in_cluster(c, y)) return "next to";
    }
  }
  return "near";
}

std::string PriorOracleBackend::partner_of(std::string_view goal) const {
  const std::string g = lower(goal);
  for (const auto& t : room_templates()) {
    for (const auto& c : t.clusters) {
      if (!in_cluster(c, g)) continue;
      for (const auto& m : cluster_categories(c)) {
        if (m != g) return m;
      }
    }
  }
  return {};
}

std::string PriorOracleBackend::complete(const CompletionRequest& request) {
  const std::string_view p = request.prompt;

  if (auto slot = slot_after(p, kEdgeMarker); slot && slot->is_array()) {
    ordered_json out = ordered_json::array();
    for (const auto& pair : *slot) {
      out.push_back({{"relationships", relation_for(pair.value("object1", ""),
                                                    pair.value("object2", ""))}});
    }
    return to_inline_json(out);
  }
  if (auto slot = slot_after(p, kSubgraphDistanceMarker)) {
    const std::string goal = slot->value("goal", "");
    double best = priors_.unrelated;
    std::string via = "nearby object";
    for (const auto& node : slot->at("subgraph").value("nodes", std::vector<std::string>{})) {
      const double d = prior_distance(node, goal);
      if (d < best) {
        best = d;
        via = node;
      }
    }
    ordered_json out;
    out["distance"] = best;
    out["reason"] = "A " + goal + " is usually about " + format_distance(best) +
                    " m from a " + via + ".";
    return to_inline_json(out);
  }
  if (auto slot = slot_after(p, kObjectDistanceMarker)) {
    const std::string a = slot->value("object1", "");
    const std::string g = slot->value("object2", "");
    const double d = prior_distance(a, g);
    ordered_json out;
    out["distance"] = d;
    out["reason"] = "A " + g + " is usually about " + format_distance(d) + " m from a " + a + ".";
    return to_inline_json(out);
  }
  if (auto slot = slot_after(p, kQuestionMarker)) {
    const std::string obj = slot->value("object", "");
    std::string partner = partner_of(slot->value("goal", ""));
    if (partner.empty()) partner = slot->value("goal", "");
    ordered_json out;
    out["question"] = "Is there a " + partner + " near the " + obj + "?";
    return to_inline_json(out);
  }
  if (auto slot = slot_after(p, kAnswerMarker)) {
    const std::string q = lower(slot->value("question", ""));
    bool yes = false;
    for (const auto& node : slot->at("subgraph").value("nodes", std::vector<std::string>{})) {
      for (const auto& part : split_label(lower(node))) {
        if (!part.empty() && q.find("is there a " + part + " ") != std::string::npos) yes = true;
      }
    }
    ordered_json out;
    out["answer"] = yes ? "Yes" : "No";
    return to_inline_json(out);
  }
  if (const auto pos = p.rfind(kExplanationMarker); pos != std::string_view::npos) {
    std::string tail(p.substr(pos + kExplanationMarker.size()));
    const auto space = tail.find(' ');
    return "Frontier " + tail.substr(0, space) +
           " lies closest to the observed objects that usually share a room with the goal.";
  }
  return "I cannot answer that.";
}

bool GroundTruthVlm::affirm(const VlmQuery& query) {
  if (!available_) throw ProviderUnavailable("vlm unavailable");
  ++queries_;
  bool answer = relation_holds(scene_, query.truth_a, query.truth_b, query.relation);
  if (error_rate_ > 0.0) {
    const auto lo = static_cast<std::uint64_t>(std::min(query.truth_a, query.truth_b) + 1);
    const auto hi = static_cast<std::uint64_t>(std::max(query.truth_a, query.truth_b) + 1);
    const double u =
        to_unit(hash_keys({seed_, static_cast<std::uint64_t>(query.frame_step), lo, hi}));
    if (u < error_rate_) answer = !answer;
  }
  return answer;
}

}  // namespace sgnav
