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

#include "sgnav/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sgnav/errors.hpp"
#include "sgnav/random.hpp"

namespace sgnav {

namespace {

constexpr double kWallHalfThickness = 0.05;
constexpr double kDoorWidth = 1.0;
constexpr double kPlacementMargin = 0.15;
constexpr double kClusterSeparation = 0.5;
constexpr double kDoorClearance = 0.9;
constexpr double kStartClearance = 0.5;
constexpr double kNextToGap = 0.4;
constexpr double kNearGap = 1.0;
constexpr double kOppositeMaxGap = 4.0;

ClusterTemplate cluster(std::string anchor, double w, double d,
                        std::vector<SatelliteTemplate> sats = {}) {
  return {std::move(anchor), w, d, std::move(sats)};
}

double snap(double v, double res) { return std::round(v / res) * res; }

struct Rect {
  Vec2 min;
  Vec2 max;
};

double gap_between(const Rect& a, const Rect& b) {
  const double dx = std::max({0.0, a.min.x - b.max.x, b.min.x - a.max.x});
  const double dy = std::max({0.0, a.min.y - b.max.y, b.min.y - a.max.y});
  return std::hypot(dx, dy);
}

Rect rect_of(const SceneObject& o) { return {o.min(), o.max()}; }

double overlap_1d(double a0, double a1, double b0, double b1) {
  return std::min(a1, b1) - std::max(a0, b0);
}

}  // namespace

// --- catalog -------------------------------------------------------------------

const std::vector<RoomTemplate>& room_templates() {
  static const std::vector<RoomTemplate> kTemplates = {
      {"bedroom",
       {cluster("bed", 2.0, 1.6,
                {{"nightstand", 0.5, 0.5, Side::kLeft, 0.1},
                 {"nightstand", 0.5, 0.5, Side::kRight, 0.1}}),
        cluster("wardrobe", 1.2, 0.6, {{"dresser", 1.0, 0.5, Side::kRight, 0.15}}),
        cluster("bookshelf", 0.9, 0.4, {{"chair", 0.5, 0.5, Side::kBottom, 0.15}}),
        cluster("plant", 0.4, 0.4), cluster("clock", 0.4, 0.2)}},
      {"kitchen",
       {cluster("refrigerator", 0.8, 0.7, {{"freezer", 0.7, 0.7, Side::kRight, 0.1}}),
        cluster("counter", 1.6, 0.6, {{"stove", 0.7, 0.6, Side::kRight, 0.1}}),
        cluster("kitchen table", 1.2, 0.8,
                {{"chair", 0.5, 0.5, Side::kBottom, 0.15},
                 {"chair", 0.5, 0.5, Side::kTop, 0.15}}),
        cluster("oven", 0.7, 0.6, {{"microwave", 0.5, 0.4, Side::kRight, 0.1}}),
        cluster("kitchen cabinet", 1.0, 0.5, {{"dishes", 0.4, 0.3, Side::kRight, 0.1}})}},
      {"living room",
       {cluster("sofa", 2.0, 0.9,
                {{"table", 1.0, 0.6, Side::kBottom, 0.35},
                 {"tv", 1.2, 0.3, Side::kBottom, 2.0}}),
        cluster("floor lamp", 0.4, 0.4, {{"reading chair", 0.7, 0.7, Side::kRight, 0.1}}),
        cluster("piano", 1.5, 0.6, {{"bench", 0.9, 0.4, Side::kBottom, 0.15}}),
        cluster("plant", 0.4, 0.4), cluster("clock", 0.4, 0.2)}},
      {"bathroom",
       {cluster("toilet", 0.5, 0.7),
        cluster("bathroom sink", 0.6, 0.5, {{"mirror", 0.6, 0.2, Side::kTop, 0.1}}),
        cluster("shower", 0.9, 0.9, {{"bathtub", 1.6, 0.8, Side::kRight, 0.1}}),
        cluster("bathroom cabinet", 0.8, 0.4, {{"toiletries", 0.3, 0.3, Side::kRight, 0.1}}),
        cluster("washing machine", 0.6, 0.6, {{"dryer", 0.6, 0.6, Side::kRight, 0.1}})}},
      {"office",
       {cluster("desk", 1.4, 0.7, {{"office chair", 0.6, 0.6, Side::kBottom, 0.15}}),
        cluster("computer", 0.4, 0.4, {{"monitor", 0.5, 0.3, Side::kRight, 0.1}}),
        cluster("bookcase", 1.0, 0.4, {{"books", 0.4, 0.3, Side::kRight, 0.1}}),
        cluster("plant", 0.4, 0.4), cluster("chair", 0.5, 0.5)}},
      {"dining room",
       {cluster("dining table", 1.6, 1.0,
                {{"chair", 0.5, 0.5, Side::kTop, 0.15},
                 {"chair", 0.5, 0.5, Side::kBottom, 0.15},
                 {"chair", 0.5, 0.5, Side::kLeft, 0.15}}),
        cluster("sideboard", 1.0, 0.6, {{"mirror", 0.8, 0.2, Side::kTop, 0.1}}),
        cluster("clock", 0.4, 0.2), cluster("plant", 0.4, 0.4)}},
  };
  return kTemplates;
}

const std::vector<std::string>& goal_categories() {
  static const std::vector<std::string> kGoals = {"bed", "toilet", "tv", "sofa",
                                                  "refrigerator"};
  return kGoals;
}

// --- scene geometry --------------------------------------------------------------

std::vector<Vec2> SceneRoom::polygon() const {
  return {min, {max.x, min.y}, max, {min.x, max.y}};
}

std::vector<Segment> SceneRoom::walls() const {
  const auto p = polygon();
  return {{p[0], p[1]}, {p[1], p[2]}, {p[2], p[3]}, {p[3], p[0]}};
}

double rect_gap(const SceneObject& a, const SceneObject& b) {
  return gap_between(rect_of(a), rect_of(b));
}

bool relation_holds(const Scene& scene, int a, int b, std::string_view relation) {
  const SceneObject* oa = nullptr;
  const SceneObject* ob = nullptr;
  for (const auto& o : scene.objects) {
    if (o.id == a) oa = &o;
    if (o.id == b) ob = &o;
  }
  if (oa == nullptr || ob == nullptr || oa->room != ob->room || a == b) return false;
  const double gap = rect_gap(*oa, *ob);
  if (relation == "next to") return gap <= kNextToGap;
  if (relation == "near") return gap <= kNearGap;
  if (relation == "opposite to") {
    const bool facing =
        overlap_1d(oa->min().x, oa->max().x, ob->min().x, ob->max().x) > 0.0 ||
        overlap_1d(oa->min().y, oa->max().y, ob->min().y, ob->max().y) > 0.0;
    return facing && gap > kNearGap && gap <= kOppositeMaxGap;
  }
  // Vertical and containment relations never hold in a flat layout.
  return false;
}

// --- generation --------------------------------------------------------------------

namespace {

struct Layout {
  std::vector<SceneRoom> rooms;
  std::vector<SceneDoor> doors;
};

Layout layout_rooms(Rng& rng, int count, const GridSpec& grid) {
  const double res = grid.resolution;
  const int cols = count <= 3 ? count : (count + 1) / 2;
  const int rows = count <= 3 ? 1 : 2;
  std::vector<double> widths(cols);
  std::vector<double> heights(rows);
  for (double& w : widths) w = snap(rng.uniform(4.0, 6.0), res);
  for (double& h : heights) h = snap(rng.uniform(4.0, 5.5), res);
  double total_w = 0.0;
  double total_h = 0.0;
  for (double w : widths) total_w += w;
  for (double h : heights) total_h += h;
  const double extent_x = grid.width * res;
  const double extent_y = grid.height * res;
  if (total_w + 1.0 > extent_x || total_h + 1.0 > extent_y) {
    throw GenerationError("rooms do not fit the grid");
  }
  const double x0 = snap(grid.origin.x + extent_x / 2 - total_w / 2, res);
  const double y0 = snap(grid.origin.y + extent_y / 2 - total_h / 2, res);

  Layout l;
  double y = y0;
  for (int r = 0; r < rows; ++r) {
    double x = x0;
    for (int c = 0; c < cols; ++c) {
      const int id = r * cols + c;
      if (id < count) {
        SceneRoom room;
        room.id = id;
        room.min = {x, y};
        room.max = {x + widths[c], y + heights[r]};
        l.rooms.push_back(room);
      }
      x += widths[c];
    }
    y += heights[r];
  }
  auto door_on = [&](const SceneRoom& a, const SceneRoom& b, bool vertical_wall) {
    SceneDoor d;
    d.room_a = a.id;
    d.room_b = b.id;
    if (vertical_wall) {
      const double lo = std::max(a.min.y, b.min.y) + 0.9;
      const double hi = std::min(a.max.y, b.max.y) - 0.9;
      const double yc = snap(rng.uniform(lo, hi), res);
      d.opening = {{a.max.x, yc - kDoorWidth / 2}, {a.max.x, yc + kDoorWidth / 2}};
    } else {
      const double lo = std::max(a.min.x, b.min.x) + 0.9;
      const double hi = std::min(a.max.x, b.max.x) - 0.9;
      const double xc = snap(rng.uniform(lo, hi), res);
      d.opening = {{xc - kDoorWidth / 2, a.max.y}, {xc + kDoorWidth / 2, a.max.y}};
    }
    l.doors.push_back(d);
  };
  for (const SceneRoom& a : l.rooms) {
    const int r = a.id / cols;
    const int c = a.id % cols;
    if (c + 1 < cols && a.id + 1 < count) door_on(a, l.rooms[a.id + 1], true);
    if (r + 1 < rows && a.id + cols < count) door_on(a, l.rooms[a.id + cols], false);
  }
  return l;
}

const RoomTemplate& template_for(std::string_view type) {
  for (const auto& t : room_templates()) {
    if (t.room_type == type) return t;
  }
  throw GenerationError("no template for room type " + std::string(type));
}

bool template_has(const RoomTemplate& t, std::string_view category) {
  for (const auto& c : t.clusters) {
    if (c.anchor == category) return true;
    for (const auto& s : c.satellites) {
      if (s.category == category) return true;
    }
  }
  return false;
}

struct Member {
  std::string category;
  Rect rect;
};

std::vector<Member> cluster_members(const ClusterTemplate& c, Vec2 center, std::size_t limit) {
  std::vector<Member> out;
  const Rect anchor{{center.x - c.width / 2, center.y - c.depth / 2},
                    {center.x + c.width / 2, center.y + c.depth / 2}};
  out.push_back({c.anchor, anchor});
  for (const auto& s : c.satellites) {
    if (out.size() >= limit) break;
    Vec2 p = center;
    switch (s.side) {
      case Side::kLeft: p.x = anchor.min.x - s.gap - s.width / 2; break;
      case Side::kRight: p.x = anchor.max.x + s.gap + s.width / 2; break;
      case Side::kTop: p.y = anchor.max.y + s.gap + s.depth / 2; break;
      case Side::kBottom: p.y = anchor.min.y - s.gap - s.depth / 2; break;
    }
    out.push_back({s.category,
                   {{p.x - s.width / 2, p.y - s.depth / 2}, {p.x + s.width / 2, p.y + s.depth / 2}}});
  }
  return out;
}

void place_objects(Rng& rng, const SceneRoom& room, const std::vector<SceneDoor>& doors,
                   int target, int& next_id, int& next_cluster,
                   std::vector<SceneObject>& objects) {
  const RoomTemplate& tmpl = template_for(room.type);
  const Rect usable{{room.min.x + kWallHalfThickness + kPlacementMargin,
                     room.min.y + kWallHalfThickness + kPlacementMargin},
                    {room.max.x - kWallHalfThickness - kPlacementMargin,
                     room.max.y - kWallHalfThickness - kPlacementMargin}};
  int placed = 0;
  auto try_place = [&](const ClusterTemplate& c, std::size_t limit) {
    for (int attempt = 0; attempt < 80; ++attempt) {
      const Vec2 center{rng.uniform(usable.min.x, usable.max.x),
                        rng.uniform(usable.min.y, usable.max.y)};
      const auto members = cluster_members(c, center, limit);
      bool ok = true;
      for (const Member& m : members) {
        if (m.rect.min.x < usable.min.x || m.rect.min.y < usable.min.y ||
            m.rect.max.x > usable.max.x || m.rect.max.y > usable.max.y) {
          ok = false;
          break;
        }
        for (const SceneObject& o : objects) {
          if (o.room == room.id && gap_between(m.rect, rect_of(o)) < kClusterSeparation) {
            ok = false;
            break;
          }
        }
        for (const SceneDoor& d : doors) {
          const Vec2 mid = d.opening.midpoint();
          const Rect door{mid, mid};
          if (gap_between(m.rect, door) < kDoorClearance) ok = false;
        }
        if (!ok) break;
      }
      if (!ok) continue;
      const int cid = next_cluster++;
      for (const Member& m : members) {
        SceneObject o;
        o.id = next_id++;
        o.category = m.category;
        o.position = (m.rect.min + m.rect.max) * 0.5;
        o.size = m.rect.max - m.rect.min;
        o.height = 0.8;
        o.room = room.id;
        o.cluster = cid;
        objects.push_back(o);
      }
      return static_cast<int>(members.size());
    }
    return 0;
  };
  for (const ClusterTemplate& c : tmpl.clusters) {
    if (placed >= target) break;
    placed += try_place(c, static_cast<std::size_t>(target - placed));
  }
  static const ClusterTemplate kFiller[] = {cluster("plant", 0.4, 0.4),
                                            cluster("chair", 0.5, 0.5)};
  for (int i = 0; placed < target && i < 6; ++i) {
    placed += try_place(kFiller[i % 2], 1);
  }
}

std::optional<Vec2> sample_start(Rng& rng, const SceneRoom& room, const SceneWorld& world) {
  const OccupancyGrid& g = world.truth();
  const int radius = static_cast<int>(std::ceil(kStartClearance / g.resolution()));
  for (int attempt = 0; attempt < 400; ++attempt) {
    const Vec2 p{snap(rng.uniform(room.min.x + 0.6, room.max.x - 0.6), 0.05) + 0.025,
                 snap(rng.uniform(room.min.y + 0.6, room.max.y - 0.6), 0.05) + 0.025};
    const Cell c = g.to_cell(p);
    bool clear = true;
    for (int dy = -radius; dy <= radius && clear; ++dy) {
      for (int dx = -radius; dx <= radius && clear; ++dx) {
        if (!g.is_free({c.x + dx, c.y + dy})) clear = false;
      }
    }
    if (clear) return p;
  }
  return std::nullopt;
}

Scene generate_once(Rng& rng, std::uint64_t seed, const SceneParams& params) {
  Scene s;
  s.seed = seed;
  s.grid = params.grid;
  const int count = rng.uniform_int(params.min_rooms, params.max_rooms);
  Layout layout = layout_rooms(rng, count, params.grid);

  std::vector<std::string> types;
  for (const auto& t : room_templates()) types.push_back(t.room_type);
  for (std::size_t i = types.size(); i > 1; --i) {
    std::swap(types[i - 1], types[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
  }
  for (std::size_t i = 0; i < layout.rooms.size(); ++i) layout.rooms[i].type = types[i];

  if (!params.goal_category.empty()) {
    bool hosted = false;
    for (const auto& r : layout.rooms) hosted |= template_has(template_for(r.type), params.goal_category);
    if (!hosted) {
      for (const auto& t : room_templates()) {
        if (template_has(t, params.goal_category)) {
          layout.rooms.back().type = t.room_type;
          hosted = true;
          break;
        }
      }
    }
    if (!hosted) throw GenerationError("no room type hosts '" + params.goal_category + "'");
  }
  s.rooms = layout.rooms;
  s.doors = layout.doors;

  int next_id = 0;
  int next_cluster = 0;
  for (const SceneRoom& room : s.rooms) {
    std::vector<SceneDoor> room_doors;
    for (const auto& d : s.doors) {
      if (d.room_a == room.id || d.room_b == room.id) room_doors.push_back(d);
    }
    const int target = rng.uniform_int(params.min_objects, params.max_objects);
    place_objects(rng, room, room_doors, target, next_id, next_cluster, s.objects);
  }

  // Goal and start room.
  std::set<std::string> present;
  for (const auto& o : s.objects) present.insert(o.category);
  std::string goal = params.goal_category;
  if (!goal.empty() && !present.count(goal)) {
    throw GenerationError("goal category '" + goal + "' could not be placed");
  }
  std::vector<int> order(s.rooms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
  }
  auto rooms_with = [&](const std::string& cat) {
    std::set<int> r;
    for (const auto& o : s.objects) {
      if (o.category == cat) r.insert(o.room);
    }
    return r;
  };
  int start_room = -1;
  if (goal.empty()) {
    for (int candidate : order) {
      std::vector<std::string> options;
      for (const auto& g : goal_categories()) {
        const auto r = rooms_with(g);
        if (!r.empty() && !r.count(candidate)) options.push_back(g);
      }
      if (!options.empty()) {
        start_room = candidate;
        goal = options[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(options.size()) - 1))];
        break;
      }
    }
    if (goal.empty()) throw GenerationError("no goal category placed outside a start room");
  } else {
    const auto r = rooms_with(goal);
    for (int candidate : order) {
      if (!r.count(candidate)) {
        start_room = candidate;
        break;
      }
    }
    if (start_room < 0) start_room = order.front();
  }
  s.goal_category = goal;

  // Decoys: relabelled objects away from every genuine goal instance.
  const auto goal_rooms = rooms_with(goal);
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < s.objects.size(); ++i) {
    const auto& o = s.objects[i];
    if (o.category != goal && !goal_rooms.count(o.room)) eligible.push_back(i);
  }

  SceneWorld pre(s);
  const auto start = sample_start(rng, s.rooms[static_cast<std::size_t>(start_room)], pre);
  if (!start) throw GenerationError("no clear start position");
  s.start = {*start, 30 * rng.uniform_int(0, 11)};

  if (params.decoy_in_start_room) {
    std::vector<std::size_t> local;
    for (std::size_t i : eligible) {
      const auto& o = s.objects[i];
      if (o.room == start_room && distance(o.position, s.start.position) >= 2.0) local.push_back(i);
    }
    if (local.empty()) {
      for (std::size_t i : eligible) {
        if (s.objects[i].room == start_room) local.push_back(i);
      }
    }
    if (local.empty()) throw GenerationError("no decoy candidate in the start room");
    s.objects[local[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(local.size()) - 1))]].decoy = true;
  }
  for (std::size_t i : eligible) {
    if (params.false_positive_rate > 0.0 && rng.bernoulli(params.false_positive_rate)) {
      s.objects[i].decoy = true;
    }
  }

  for (const auto& o : s.objects) {
    if (!o.decoy) s.goals[o.category].push_back(o.id);
  }

  for (std::size_t i = 0; i < s.objects.size(); ++i) {
    for (std::size_t j = i + 1; j < s.objects.size(); ++j) {
      const auto& a = s.objects[i];
      const auto& b = s.objects[j];
      for (const char* rel : {"next to", "near", "opposite to"}) {
        if (!relation_holds(s, a.id, b.id, rel)) continue;
        if (params.relation_density < 1.0 && !rng.bernoulli(params.relation_density)) break;
        s.relations.push_back({a.id, b.id, rel});
        break;
      }
    }
  }
  return s;
}

}  // namespace

Scene generate_scene(std::uint64_t seed, const SceneParams& params) {
  if (params.min_rooms < 2 || params.max_rooms > 6 || params.min_rooms > params.max_rooms) {
    throw GenerationError("room count must satisfy 2 <= min <= max <= 6");
  }
  if (params.min_objects < 3 || params.max_objects > 10 ||
      params.min_objects > params.max_objects) {
    throw GenerationError("objects per room must satisfy 3 <= min <= max <= 10");
  }
  if (params.false_positive_rate < 0.0 || params.false_positive_rate > 1.0) {
    throw GenerationError("false positive rate must lie in [0, 1]");
  }
  Rng rng(hash_keys({seed, 0x5CE7E}));
  std::string last_error;
  for (int attempt = 0; attempt < 25; ++attempt) {
    Scene s;
    try {
      s = generate_once(rng, seed, params);
    } catch (const GenerationError& e) {
      if (std::string(e.what()).find("do not fit") != std::string::npos) throw;
      last_error = e.what();
      continue;
    }
    Simulator sim(s, s.goal_category);
    if (std::isfinite(sim.distance_to_goal(s.start.position))) return s;
    last_error = "goal unreachable from start";
  }
  throw GenerationError("could not generate a solvable scene: " + last_error);
}

std::vector<std::string> validate_scene(const Scene& scene) {
  std::vector<std::string> problems;
  std::set<int> ids;
  for (const auto& o : scene.objects) {
    if (!ids.insert(o.id).second) problems.push_back("duplicate object id " + std::to_string(o.id));
    int inside = 0;
    for (const auto& r : scene.rooms) {
      if (r.contains(o.min()) && r.contains(o.max())) ++inside;
    }
    if (inside != 1) {
      problems.push_back("object " + std::to_string(o.id) + " lies inside " +
                         std::to_string(inside) + " rooms");
    }
  }
  for (const auto& [cat, list] : scene.goals) {
    for (int id : list) {
      auto it = std::find_if(scene.objects.begin(), scene.objects.end(),
                             [&](const SceneObject& o) { return o.id == id; });
      if (it == scene.objects.end() || it->decoy || it->category != cat) {
        problems.push_back("goal entry " + cat + "/" + std::to_string(id) + " is not genuine");
      }
    }
  }
  return problems;
}

// --- world --------------------------------------------------------------------------

SceneWorld::SceneWorld(const Scene& scene) : scene_(&scene), truth_(scene.grid) {
  const double res = scene.grid.resolution;
  if (scene.rooms.empty()) return;
  Vec2 lo = scene.rooms.front().min;
  Vec2 hi = scene.rooms.front().max;
  for (const auto& r : scene.rooms) {
    lo = {std::min(lo.x, r.min.x), std::min(lo.y, r.min.y)};
    hi = {std::max(hi.x, r.max.x), std::max(hi.y, r.max.y)};
  }
  const Cell c0 = truth_.to_cell(lo - Vec2{0.2, 0.2});
  const Cell c1 = truth_.to_cell(hi + Vec2{0.2, 0.2});
  bounds_ = CellBox{c0.x, c0.y, c1.x, c1.y}.clipped(truth_.width(), truth_.height());
  wall_.assign(static_cast<std::size_t>(bounds_.width()) * bounds_.height(), 0);

  auto on_boundary = [&](const SceneRoom& r, Vec2 p) {
    const double t = kWallHalfThickness;
    const bool in_x = p.x >= r.min.x - t && p.x <= r.max.x + t;
    const bool in_y = p.y >= r.min.y - t && p.y <= r.max.y + t;
    return (in_y && (std::fabs(p.x - r.min.x) <= t || std::fabs(p.x - r.max.x) <= t)) ||
           (in_x && (std::fabs(p.y - r.min.y) <= t || std::fabs(p.y - r.max.y) <= t));
  };
  auto in_door = [&](Vec2 p) {
    for (const auto& d : scene.doors) {
      const Segment& s = d.opening;
      if (s.a.x == s.b.x) {
        if (std::fabs(p.x - s.a.x) <= kWallHalfThickness + 1e-9 &&
            p.y >= std::min(s.a.y, s.b.y) && p.y <= std::max(s.a.y, s.b.y)) {
          return true;
        }
      } else if (std::fabs(p.y - s.a.y) <= kWallHalfThickness + 1e-9 &&
                 p.x >= std::min(s.a.x, s.b.x) && p.x <= std::max(s.a.x, s.b.x)) {
        return true;
      }
    }
    return false;
  };

  for (int y = bounds_.y0; y <= bounds_.y1; ++y) {
    for (int x = bounds_.x0; x <= bounds_.x1; ++x) {
      const Cell c{x, y};
      const Vec2 p = truth_.cell_center(c);
      bool wall = false;
      for (const auto& r : scene.rooms) wall |= on_boundary(r, p);
      if (wall && in_door(p)) {
        truth_.set(c, CellState::kFree);
        continue;
      }
      if (wall) {
        wall_[static_cast<std::size_t>(y - bounds_.y0) * bounds_.width() +
              static_cast<std::size_t>(x - bounds_.x0)] = 1;
        truth_.set(c, CellState::kOccupied);
        continue;
      }
      for (const auto& r : scene.rooms) {
        if (!r.contains(p)) continue;
        regions_[r.id].push_back(c);
        bool occupied = false;
        for (const auto& o : scene.objects) {
          const Vec2 mn = o.min();
          const Vec2 mx = o.max();
          if (p.x >= mn.x && p.x <= mx.x && p.y >= mn.y && p.y <= mx.y) {
            footprints_[o.id].push_back(c);
            occupied = true;
          }
        }
        truth_.set(c, occupied ? CellState::kOccupied : CellState::kFree);
        break;
      }
    }
  }
  (void)res;
  for (auto& [id, cells] : regions_) std::sort(cells.begin(), cells.end());
  for (auto& [id, cells] : footprints_) std::sort(cells.begin(), cells.end());
  for (const auto& o : scene.objects) {
    auto& fp = footprints_[o.id];
    if (fp.empty()) fp.push_back(truth_.to_cell(o.position));
  }
}

bool SceneWorld::is_wall(Cell c) const {
  if (!bounds_.contains(c)) return false;
  return wall_[static_cast<std::size_t>(c.y - bounds_.y0) * bounds_.width() +
               static_cast<std::size_t>(c.x - bounds_.x0)] != 0;
}

const std::vector<Cell>& SceneWorld::footprint(int object_id) const {
  auto it = footprints_.find(object_id);
  if (it == footprints_.end()) throw LookupError("no object " + std::to_string(object_id));
  return it->second;
}

const std::vector<Cell>& SceneWorld::region(int room_id) const {
  static const std::vector<Cell> kEmpty;
  auto it = regions_.find(room_id);
  return it == regions_.end() ? kEmpty : it->second;
}

std::optional<int> SceneWorld::room_at(Vec2 p) const {
  for (const auto& r : scene_->rooms) {
    if (r.contains(p)) return r.id;
  }
  return std::nullopt;
}

const SceneObject& SceneWorld::object(int id) const {
  for (const auto& o : scene_->objects) {
    if (o.id == id) return o;
  }
  throw LookupError("no object " + std::to_string(id));
}

// --- simulator ------------------------------------------------------------------------

std::string_view to_string(TerminationCause c) {
  switch (c) {
    case TerminationCause::kNone: return "none";
    case TerminationCause::kStopped: return "stopped";
    case TerminationCause::kBudgetExhausted: return "budget_exhausted";
    case TerminationCause::kExplorationExhausted: return "exploration_exhausted";
    case TerminationCause::kAborted: return "aborted";
  }
  return "none";
}

Simulator::Simulator(const Scene& scene, std::string goal, SimulatorConfig config)
    : scene_(scene), goal_(std::move(goal)), config_(config), world_(scene) {
  auto it = scene.goals.find(goal_);
  if (it != scene.goals.end()) {
    for (int id : it->second) {
      const auto& fp = world_.footprint(id);
      goal_cells_.insert(goal_cells_.end(), fp.begin(), fp.end());
    }
  }
  if (!goal_cells_.empty()) {
    goal_field_ = distance_field(world_.truth(), goal_cells_, {false, 0.25});
  }
}

EpisodeState Simulator::reset() const {
  EpisodeState s;
  s.pose = scene_.start;
  s.pose.heading_deg = normalize_heading(s.pose.heading_deg);
  s.goal = goal_;
  return s;
}

DepthScan Simulator::depth_scan(const Pose& pose) const {
  DepthScan scan;
  const auto& sensor = config_.sensor;
  const OccupancyGrid& g = world_.truth();
  const double step = g.resolution() * 0.25;
  for (int i = 0; i < sensor.num_rays; ++i) {
    const double bearing =
        sensor.num_rays == 1
            ? 0.0
            : sensor.hfov_deg / 2 - sensor.hfov_deg * i / (sensor.num_rays - 1);
    DepthRay ray{bearing, sensor.max_range, false};
    for (double t = 0.0; t <= sensor.max_range; t += step) {
      const Cell c = g.to_cell(ray_point(pose, bearing, t));
      const CellState st = g.at(c);
      if (st == CellState::kOccupied) {
        ray.range = t;
        ray.hit = true;
        break;
      }
      if (st == CellState::kUnknown) {
        ray.range = t;
        break;
      }
    }
    scan.rays.push_back(ray);
  }
  return scan;
}

bool Simulator::visible(const SceneObject& o, const Pose& pose) const {
  const double d = distance(o.position, pose.position);
  if (d < config_.sensor.min_range || d > config_.sensor.max_range) return false;
  const Vec2 v = o.position - pose.position;
  const double bearing = wrap_deg(rad_to_deg(std::atan2(v.y, v.x)) - pose.heading_deg);
  if (std::fabs(bearing) > config_.sensor.hfov_deg / 2) return false;
  const OccupancyGrid& g = world_.truth();
  for (Cell c : line_cells(g.to_cell(pose.position), g.to_cell(o.position))) {
    if (world_.is_wall(c)) return false;
  }
  return true;
}

double Simulator::confidence(const SceneObject& o, double range, int step) const {
  const double frac = std::clamp(range / config_.sensor.max_range, 0.0, 1.0);
  const double base =
      config_.near_confidence - (config_.near_confidence - config_.far_confidence) * frac;
  const double u = to_unit(hash_keys({scene_.seed, static_cast<std::uint64_t>(step),
                                      static_cast<std::uint64_t>(o.id)}));
  double c = base + config_.confidence_noise * (2.0 * u - 1.0);
  if (o.decoy) c *= config_.decoy_confidence_factor;
  return std::clamp(c, 0.0, 1.0);
}

Observation Simulator::observe(const Pose& pose, int step) const {
  Observation obs;
  obs.scan = depth_scan(pose);
  std::set<int> rooms;
  if (auto r = world_.room_at(pose.position)) rooms.insert(*r);
  for (const auto& o : scene_.objects) {
    if (!visible(o, pose)) continue;
    DetectionObservation d;
    d.category = o.decoy ? goal_ : o.category;
    d.confidence = confidence(o, distance(o.position, pose.position), step);
    d.centroid = {o.position.x, o.position.y, o.height / 2};
    d.footprint = world_.footprint(o.id);
    d.is_injected_false_positive = o.decoy;
    d.truth_id = o.id;
    obs.detections.push_back(std::move(d));
    obs.covisible.push_back(o.id);
    rooms.insert(o.room);
  }
  for (int id : rooms) {
    const auto& r = scene_.rooms.at(static_cast<std::size_t>(id));
    obs.rooms.push_back({r.id, r.type, world_.region(r.id), r.walls()});
  }
  return obs;
}

Simulator::StepOutcome Simulator::step(const EpisodeState& state, Action action) const {
  if (state.terminated) throw EpisodeFault("action after episode termination");
  StepOutcome out;
  out.state = state;
  EpisodeState& s = out.state;
  s.steps += 1;
  switch (action) {
    case Action::kMoveForward: {
      const Pose next = apply_action(s.pose, action);
      const OccupancyGrid& g = world_.truth();
      const Cell from = g.to_cell(s.pose.position);
      for (Cell c : line_cells(from, g.to_cell(next.position))) {
        if (c == from) continue;
        if (g.at(c) != CellState::kFree) {
          out.collision = true;
          out.contact = c;
          break;
        }
      }
      if (out.collision) {
        s.collisions += 1;
      } else {
        s.pose = next;
        s.path_length += kForwardStep;
      }
      break;
    }
    case Action::kTurnLeft:
    case Action::kTurnRight:
      s.pose = apply_action(s.pose, action);
      break;
    case Action::kStop:
      s.stop_issued = true;
      s.terminated = true;
      s.cause = TerminationCause::kStopped;
      break;
  }
  if (!s.terminated && s.steps >= config_.max_steps) {
    s.terminated = true;
    s.cause = TerminationCause::kBudgetExhausted;
  }
  s.trace.push_back({s.steps, action, s.pose, out.collision});
  out.observation = observe(s.pose, s.steps);
  return out;
}

double Simulator::distance_to_goal(Vec2 p) const {
  if (!goal_field_) return kUnreachable;
  return goal_field_->at(world_.truth(), p);
}

bool Simulator::check_success(const EpisodeState& state) const {
  return state.stop_issued && state.steps <= config_.max_steps &&
         distance_to_goal(state.pose.position) <= config_.success_distance;
}

double Simulator::optimal_path_length() const {
  return std::max(0.0, distance_to_goal(scene_.start.position) - config_.success_distance);
}

}  // namespace sgnav
