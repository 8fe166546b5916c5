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

#ifndef SGNAV_PERCEPTION_HPP_
#define SGNAV_PERCEPTION_HPP_

#include <string>
#include <vector>

#include "sgnav/geometry.hpp"

namespace sgnav {

struct DetectionObservation {
  std::string category;
  double confidence = 0.0;
  Vec3 centroid;
  std::vector<Cell> footprint;

  // Hidden ground truth. Only evaluation code and simulated oracles read these.
  bool is_injected_false_positive = false;
  int truth_id = -1;
};

struct RoomObservation {
  int truth_id = -1;
  std::string room_type;
  std::vector<Cell> region;  // sorted
  std::vector<Segment> walls;
};

}  // namespace sgnav

#endif  // SGNAV_PERCEPTION_HPP_
