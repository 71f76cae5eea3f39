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

#include "pie/scenario.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

namespace pie
{
namespace
{

void require(bool ok, const std::string & field, const std::string & message)
{
  if (!ok) {
    throw ScenarioError(field, message);
  }
}

bool finite_point(const Point2 & p)
{
  return std::isfinite(p.x()) && std::isfinite(p.y());
}

void check_polygon(const Polygon & poly, const std::string & field)
{
  require(poly.vertices.size() >= 3, field, "polygon needs at least 3 vertices");
  for (const auto & v : poly.vertices) {
    require(finite_point(v), field, "vertex is not finite");
  }
  require(is_simple(poly), field, "polygon is self-intersecting");
  require(signed_area(poly) > 0.0, field, "polygon must be counterclockwise with non-zero area");
}

}  // namespace

const char * to_string(InfoVariant v)
{
  switch (v) {
    case InfoVariant::over:
      return "over";
    case InfoVariant::under:
      return "under";
    case InfoVariant::ave:
      return "ave";
  }
  return "ave";
}

InfoVariant info_variant_from_string(const std::string & s)
{
  if (s == "over") {
    return InfoVariant::over;
  }
  if (s == "under") {
    return InfoVariant::under;
  }
  if (s == "ave") {
    return InfoVariant::ave;
  }
  throw std::invalid_argument("unknown info variant '" + s + "' (expected over|under|ave)");
}

InterestGrid Scenario::prior_grid() const
{
  auto g = InterestGrid::covering(bounds, grid.resolution, grid.prior);
  for (const auto & region : grid.regions) {
    for (int c = 0; c < g.size(); ++c) {
      if (contains(region.polygon, g.center(c))) {
        g.set_prob(c, region.p);
      }
    }
  }
  return g;
}

EdgeModel Scenario::edge_model() const
{
  return EdgeModel{episode.dt, robot.speed, noise};
}

void validate(const Scenario & s)
{
  require(s.schema_version == Scenario::kSchemaVersion, "schema_version",
          "unsupported version " + std::to_string(s.schema_version));
  require(finite_point(s.bounds.min) && finite_point(s.bounds.max) && s.bounds.width() > 0.0 &&
            s.bounds.height() > 0.0,
          "bounds", "must be a non-empty rectangle");

  for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
    check_polygon(s.obstacles[i], "obstacles[" + std::to_string(i) + "]");
  }
  for (std::size_t i = 0; i < s.landmarks.size(); ++i) {
    const auto & lm = s.landmarks[i];
    const std::string f = "landmarks[" + std::to_string(i) + "]";
    require(s.bounds.contains(lm.position), f + ".position", "must lie inside bounds");
    require(lm.range_noise_std > 0.0, f + ".range_std", "must be positive");
    require(lm.bearing_noise_std > 0.0, f + ".bearing_std", "must be positive");
    require(lm.detect_range > 0.0, f + ".detect_range", "must be positive");
  }

  require(!s.lra.polygons.empty(), "lra.polygons", "at least one region is required");
  for (std::size_t i = 0; i < s.lra.polygons.size(); ++i) {
    const auto & poly = s.lra.polygons[i];
    const std::string f = "lra.polygons[" + std::to_string(i) + "]";
    check_polygon(poly, f);
    require(is_convex(poly), f, "must be convex");
    for (const auto & v : poly.vertices) {
      require(s.bounds.contains(v), f, "must lie inside bounds");
    }
    for (const auto & obs : s.obstacles) {
      require(point_is_clear(std::span(&obs, 1), centroid(poly), 0.0), f, "overlaps an obstacle");
    }
  }
  require(s.lra.gamma > 0.0, "lra.gamma", "must be positive");
  require(s.lra.delta > 0.0 && s.lra.delta < 1.0, "lra.delta", "must lie in (0, 1)");

  require(s.grid.resolution > 0.0, "grid.resolution", "must be positive");
  require(s.grid.prior >= 0.0 && s.grid.prior <= 1.0, "grid.prior", "must lie in [0, 1]");
  for (std::size_t i = 0; i < s.grid.regions.size(); ++i) {
    const std::string f = "grid.regions[" + std::to_string(i) + "]";
    check_polygon(s.grid.regions[i].polygon, f + ".polygon");
    require(s.grid.regions[i].p >= 0.0 && s.grid.regions[i].p <= 1.0, f + ".p", "must lie in [0, 1]");
  }
  try {
    (void)InterestGrid::covering(s.bounds, s.grid.resolution, s.grid.prior);
  } catch (const std::exception & e) {
    throw ScenarioError("grid.resolution", e.what());
  }

  require(s.sensor.theta >= 0.5 && s.sensor.theta <= 1.0, "sensor.theta", "must lie in [0.5, 1]");
  require(s.sensor.phi >= 0.5 && s.sensor.phi <= 1.0, "sensor.phi", "must lie in [0.5, 1]");
  require(s.sensor.range > 0.0, "sensor.range", "must be positive");
  require(s.sensor.fov > 0.0 && s.sensor.fov <= 3.14159265358979323846, "sensor.fov", "must lie in (0, pi]");
  require(s.sensor.rate > 0.0, "sensor.rate", "must be positive");

  require(s.noise.v_std >= 0.0, "noise.v_std", "must be non-negative");
  require(s.noise.omega_std >= 0.0, "noise.omega_std", "must be non-negative");

  const auto & r = s.robot;
  require(s.bounds.contains(r.initial_pose.position()), "robot.initial_pose", "must lie inside bounds");
  require(point_is_clear(s.obstacles, r.initial_pose.position(), 0.0), "robot.initial_pose",
          "lies inside an obstacle");
  require(r.initial_cov.allFinite() && (r.initial_cov - r.initial_cov.transpose()).norm() < 1e-10 &&
            r.initial_cov.llt().info() == Eigen::Success,
          "robot.initial_cov", "must be symmetric positive definite");
  require(r.speed > 0.0, "robot.speed", "must be positive");
  require(r.radius >= 0.0, "robot.radius", "must be non-negative");
  require(r.gains.k_x > 0.0 && r.gains.k_y > 0.0 && r.gains.k_psi > 0.0, "robot.gains",
          "gains must be positive");
  require(r.gains.v_max > 0.0 && r.gains.omega_max > 0.0, "robot.gains", "limits must be positive");

  require(s.prm.d_min >= 0.0 && s.prm.d_min < s.prm.d_max, "prm.d_min", "must satisfy 0 <= d_min < d_max");
  require(s.prm.clearance >= 0.0, "prm.clearance", "must be non-negative");
  require(!s.prm.vertices.empty() || s.prm.nodes >= 2, "prm.nodes", "must be at least 2");

  const auto & p = s.planner;
  require(p.alpha > 0.0 && p.alpha < 1.0, "planner.alpha", "must lie in (0, 1)");
  require(p.beta > 0.0 && p.beta < 1.0, "planner.beta", "must lie in (0, 1)");
  require(p.horizon >= 1, "planner.horizon", "must be at least 1");
  require(p.n_cert_tol >= 0.0, "planner.n_cert_tol", "must be non-negative");
  require(p.samples >= 1, "planner.samples", "must be at least 1");
  require(p.max_paths >= 0, "planner.max_paths", "must be non-negative");
  require(p.time_budget >= 0.0, "planner.time_budget", "must be non-negative");
  require(p.max_nodes >= 0, "planner.max_nodes", "must be non-negative");
  require(!p.sigma_worst || *p.sigma_worst > 0.0, "planner.sigma_worst", "must be positive");
  require(p.trace_cap > 0.0, "planner.trace_cap", "must be positive");
  require(!p.goal_component ||
            (*p.goal_component >= 0 && *p.goal_component < static_cast<int>(s.lra.polygons.size())),
          "planner.goal_component", "index out of range");

  require(s.episode.stages >= 1, "episode.stages", "must be at least 1");
  require(s.episode.dt > 0.0, "episode.dt", "must be positive");
  require(s.episode.dwell_cap >= 0.0, "episode.dwell_cap", "must be non-negative");
  require(s.episode.settle_time >= 0.0, "episode.settle_time", "must be non-negative");
  require(s.episode.nees_window >= 1, "episode.nees_window", "must be at least 1");
}

Point2 goal_point(const Scenario & scenario, const Point2 & from)
{
  const auto & polys = scenario.lra.polygons;
  if (scenario.planner.goal_component) {
    return centroid(polys.at(static_cast<std::size_t>(*scenario.planner.goal_component)));
  }
  Point2 best = centroid(polys.front());
  double best_d = (best - from).norm();
  for (std::size_t i = 1; i < polys.size(); ++i) {
    const Point2 c = centroid(polys[i]);
    const double d = (c - from).norm();
    if (d < best_d) {
      best = c;
      best_d = d;
    }
  }
  return best;
}

double certainty_threshold(const SensorModel & sensor, double tol)
{
  try {
    return crossing_point(0.5, sensor.worst_case(), tol);
  } catch (const NonConvergentSensor &) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace pie
