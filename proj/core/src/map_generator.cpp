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

#include "pie/map_generator.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "pie/random.hpp"

namespace pie
{

namespace
{

bool overlaps(const Polygon & a, const Polygon & b, double margin)
{
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    const auto & p = a.vertices[i];
    const auto & q = a.vertices[(i + 1) % a.vertices.size()];
    if (segment_polygon_distance(b, p, q) <= margin) {
      return true;
    }
  }
  return contains(a, centroid(b)) || contains(b, centroid(a));
}

std::optional<Scenario> draw(const Scenario & base, Rng & rng, const DeskMapParams & p)
{
  Scenario s = base;
  s.bounds = {{0.0, 0.0}, {p.width, p.height}};
  s.obstacles.clear();
  s.landmarks.clear();
  s.lra.polygons.clear();
  s.grid.regions.clear();
  s.prm.vertices.clear();
  s.prm.nodes = p.prm_nodes;
  s.prm.d_min = p.d_min;
  s.prm.d_max = p.d_max;
  s.prm.seed = rng.next_u64();
  s.seed = rng.next_u64();

  const double margin = 0.1;
  s.robot.initial_pose = {
    rng.uniform(0.25, 0.6), rng.uniform(0.4, p.height - 0.4), rng.uniform(-0.5, 0.5)};

  const int n_regions = p.min_regions + static_cast<int>(rng.below(
                                          static_cast<std::uint64_t>(p.max_regions - p.min_regions + 1)));
  for (int i = 0; i < n_regions; ++i) {
    const double size = rng.uniform(p.min_region_size, p.max_region_size);
    const double x0 = rng.uniform(p.width * 2.0 / 3.0, p.width - size - margin);
    const double y0 = rng.uniform(margin, p.height - size - margin);
    const Polygon poly = make_rectangle({x0, y0}, {x0 + size, y0 + size});
    for (const auto & other : s.lra.polygons) {
      if (overlaps(poly, other, 0.05)) {
        return std::nullopt;
      }
    }
    s.lra.polygons.push_back(poly);
  }

  int next_id = 0;
  auto add_landmark = [&](const Point2 & at) {
    Landmark lm;
    lm.id = next_id++;
    lm.position = at;
    lm.detect_range = p.landmark_range;
    lm.range_noise_std = p.landmark_range_std;
    lm.bearing_noise_std = p.landmark_bearing_std;
    s.landmarks.push_back(lm);
  };
  for (const auto & region : s.lra.polygons) {
    const Point2 c = centroid(region);
    for (int k = 0; k < p.landmarks_per_region; ++k) {
      const Point2 at = c + Point2{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
      if (!s.bounds.contains(at)) {
        return std::nullopt;
      }
      add_landmark(at);
    }
  }
  for (int k = 0; k < p.scattered_landmarks; ++k) {
    add_landmark({rng.uniform(margin, p.width - margin), rng.uniform(margin, p.height - margin)});
  }

  const int n_obstacles = p.min_obstacles + static_cast<int>(rng.below(
                                              static_cast<std::uint64_t>(p.max_obstacles - p.min_obstacles + 1)));
  for (int i = 0; i < n_obstacles; ++i) {
    const double w = rng.uniform(p.min_obstacle_size, p.max_obstacle_size);
    const double h = rng.uniform(p.min_obstacle_size, p.max_obstacle_size);
    const double x0 = rng.uniform(p.width * 0.25, p.width * 0.75 - w);
    const double y0 = rng.uniform(0.0, p.height - h);
    const Polygon box = make_rectangle({x0, y0}, {x0 + w, y0 + h});
    for (const auto & region : s.lra.polygons) {
      if (overlaps(box, region, 0.2)) {
        return std::nullopt;
      }
    }
    if (distance_to_polygon(box, s.robot.initial_pose.position()) < 0.4) {
      return std::nullopt;
    }
    for (const auto & lm : s.landmarks) {
      if (contains(box, lm.position)) {
        return std::nullopt;
      }
    }
    s.obstacles.push_back(box);
  }
  return s;
}

}  // namespace

Scenario desk_base_scenario()
{
  Scenario s;
  s.name = "desk";
  s.grid.resolution = 0.25;
  s.grid.prior = 0.5;
  s.sensor = SensorModel{0.75, 0.75, 1.0, 1.658, 10.0};
  s.noise = ProcessNoise{0.05, 0.08};
  s.robot.initial_cov = Vector3(0.0025, 0.0025, 0.0025).asDiagonal();
  s.robot.speed = 0.5;
  s.robot.radius = 0.05;
  s.prm.clearance = 0.25;
  s.lra.gamma = 0.05;
  s.planner.alpha = 0.9;
  s.planner.samples = 2000;
  s.episode.stages = 1;
  return s;
}

GeneratedMap generate_desk_map(const Scenario & base, std::uint64_t seed, const DeskMapParams & params)
{
  Rng rng(mix_seed(seed));
  GeneratedMap out;
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    auto s = draw(base, rng, params);
    if (!s) {
      ++out.rejected;
      continue;
    }
    s->name = "desk-" + std::to_string(seed);
    try {
      validate(*s);
      auto rm = build_prm(*s);
      out.scenario = std::move(*s);
      out.roadmap = std::move(rm);
      return out;
    } catch (const std::exception &) {
      ++out.rejected;
    }
  }
  throw std::runtime_error(
    "no valid desk map after " + std::to_string(params.max_attempts) + " attempts");
}

}  // namespace pie
