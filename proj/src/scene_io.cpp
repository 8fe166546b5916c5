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

#include <string>

#include "sgnav/errors.hpp"
#include "sgnav/simulator.hpp"

namespace sgnav {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json vec(Vec2 v) { return ordered_json::array({v.x, v.y}); }

Vec2 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("expected [x, y]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

ordered_json scene_to_json(const Scene& scene) {
  ordered_json j;
  j["schema_version"] = scene.schema_version;
  j["seed"] = scene.seed;
  j["grid"] = {{"width", scene.grid.width},
               {"height", scene.grid.height},
               {"resolution", scene.grid.resolution},
               {"origin", vec(scene.grid.origin)}};
  j["rooms"] = ordered_json::array();
  for (const auto& r : scene.rooms) {
    j["rooms"].push_back(
        {{"id", r.id}, {"type", r.type}, {"min", vec(r.min)}, {"max", vec(r.max)}});
  }
  j["doors"] = ordered_json::array();
  for (const auto& d : scene.doors) {
    j["doors"].push_back({{"room_a", d.room_a},
                          {"room_b", d.room_b},
                          {"opening", {vec(d.opening.a), vec(d.opening.b)}}});
  }
  j["objects"] = ordered_json::array();
  for (const auto& o : scene.objects) {
    j["objects"].push_back({{"id", o.id},
                            {"category", o.category},
                            {"position", vec(o.position)},
                            {"size", vec(o.size)},
                            {"height", o.height},
                            {"room", o.room},
                            {"cluster", o.cluster},
                            {"decoy", o.decoy}});
  }
  j["relations"] = ordered_json::array();
  for (const auto& r : scene.relations) {
    j["relations"].push_back({{"a", r.a}, {"b", r.b}, {"relation", r.relation}});
  }
  j["goals"] = ordered_json::object();
  for (const auto& [cat, ids] : scene.goals) j["goals"][cat] = ids;
  j["goal_category"] = scene.goal_category;
  j["start"] = {{"position", vec(scene.start.position)},
                {"heading_deg", scene.start.heading_deg}};
  return j;
}

Scene scene_from_json(const json& j) {
  try {
    Scene s;
    s.schema_version = j.at("schema_version").get<int>();
    if (s.schema_version != kSceneSchemaVersion) {
      throw InputError("unsupported scene schema version " + std::to_string(s.schema_version));
    }
    s.seed = j.at("seed").get<std::uint64_t>();
    const auto& g = j.at("grid");
    s.grid.width = g.at("width").get<int>();
    s.grid.height = g.at("height").get<int>();
    s.grid.resolution = g.at("resolution").get<double>();
    s.grid.origin = vec_from(g.at("origin"));
    if (s.grid.width <= 0 || s.grid.height <= 0 || !(s.grid.resolution > 0.0)) {
      throw InputError("grid dimensions must be positive");
    }
    for (const auto& r : j.at("rooms")) {
      s.rooms.push_back({r.at("id").get<int>(), r.at("type").get<std::string>(),
                         vec_from(r.at("min")), vec_from(r.at("max"))});
    }
    for (std::size_t i = 0; i < s.rooms.size(); ++i) {
      if (s.rooms[i].id != static_cast<int>(i)) throw InputError("room ids must be 0..n-1 in order");
    }
    for (const auto& d : j.at("doors")) {
      const auto& op = d.at("opening");
      if (!op.is_array() || op.size() != 2) throw InputError("door opening needs two points");
      s.doors.push_back({d.at("room_a").get<int>(), d.at("room_b").get<int>(),
                         {vec_from(op.at(0)), vec_from(op.at(1))}});
    }
    for (const auto& o : j.at("objects")) {
      SceneObject obj;
      obj.id = o.at("id").get<int>();
      obj.category = o.at("category").get<std::string>();
      obj.position = vec_from(o.at("position"));
      obj.size = vec_from(o.at("size"));
      obj.height = o.value("height", 0.8);
      obj.room = o.at("room").get<int>();
      obj.cluster = o.value("cluster", -1);
      obj.decoy = o.value("decoy", false);
      s.objects.push_back(std::move(obj));
    }
    for (const auto& r : j.at("relations")) {
      s.relations.push_back(
          {r.at("a").get<int>(), r.at("b").get<int>(), r.at("relation").get<std::string>()});
    }
    for (const auto& [cat, ids] : j.at("goals").items()) {
      s.goals[cat] = ids.get<std::vector<int>>();
    }
    s.goal_category = j.at("goal_category").get<std::string>();
    s.start.position = vec_from(j.at("start").at("position"));
    s.start.heading_deg = j.at("start").at("heading_deg").get<int>();
    return s;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed scene: ") + e.what());
  }
}

std::string write_scene(const Scene& scene) { return scene_to_json(scene).dump(2) + "\n"; }

Scene read_scene(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("scene is not valid JSON");
  return scene_from_json(j);
}

}  // namespace sgnav
