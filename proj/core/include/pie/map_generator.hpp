// Copyright 2026 The PIE Explorer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIE_MAP_GENERATOR_HPP_
#define PIE_MAP_GENERATOR_HPP_

#include <cstdint>
#include <utility>

#include "pie/roadmap.hpp"
#include "pie/scenario.hpp"

namespace pie
{

/// Distribution of the randomly generated desk-scale maps.
///
/// The robot starts near the left edge; localization regions sit in the right third,
/// each with a pair of nearby landmarks. A few more landmarks and axis-aligned box
/// obstacles are scattered over the remaining space.
struct DeskMapParams
{
  double width = 4.0;
  double height = 3.0;
  int min_obstacles = 0;
  int max_obstacles = 2;
  double min_obstacle_size = 0.3;
  double max_obstacle_size = 0.6;
  int min_regions = 1;
  int max_regions = 2;
  double min_region_size = 0.5;
  double max_region_size = 0.8;
  int landmarks_per_region = 0;
  int scattered_landmarks = 4;
  double landmark_range = 1.0;
  double landmark_range_std = 0.1;
  double landmark_bearing_std = 0.05;
  int prm_nodes = 10;
  double d_min = 0.4;
  double d_max = 1.5;
  int max_attempts = 200;
};

struct GeneratedMap
{
  Scenario scenario;
  Roadmap roadmap;
  /// number of draws rejected before this one (invalid or disconnected)
  int rejected = 0;
};

/// Draws a valid scenario with a connected roadmap. `base` supplies the sensor, noise,
/// planner and episode settings; geometry, landmarks and seeds are replaced.
GeneratedMap generate_desk_map(const Scenario & base, std::uint64_t seed, const DeskMapParams & params = {});

/// Settings shared by generated desk maps: noise, sensor and planner defaults.
Scenario desk_base_scenario();

}  // namespace pie

#endif  // PIE_MAP_GENERATOR_HPP_
