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

#ifndef PIE_SCENARIO_HPP_
#define PIE_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pie/geometry.hpp"
#include "pie/interest_map.hpp"
#include "pie/vehicle.hpp"

namespace pie
{

/// Union of convex polygons where the robot can relocalize.
struct LocalizationRegion
{
  std::vector<Polygon> polygons;
  double gamma = 0.05;  // covariance trace threshold
  double delta = 0.05;  // localization failure probability

  bool operator==(const LocalizationRegion & other) const = default;
};

/// Tail information approximation used by the receding-horizon planner.
enum class InfoVariant
{
  over,
  under,
  ave,
};

const char * to_string(InfoVariant v);
InfoVariant info_variant_from_string(const std::string & s);

struct PriorRegion
{
  Polygon polygon;
  double p = 0.5;

  bool operator==(const PriorRegion & other) const = default;
};

struct GridSpec
{
  double resolution = 0.25;
  double prior = 0.5;
  /// Cells whose centroid falls in a region take that region's prior (last match wins).
  std::vector<PriorRegion> regions;

  bool operator==(const GridSpec & other) const = default;
};

struct PrmConfig
{
  int nodes = 80;
  double d_min = 0.5;
  double d_max = 1.0;
  std::uint64_t seed = 1;
  double clearance = 0.1;
  /// When non-empty these vertices replace random sampling.
  std::vector<Point2> vertices;

  bool operator==(const PrmConfig & other) const = default;
};

struct PlannerParams
{
  double alpha = 0.95;
  double beta = 0.1;
  int horizon = 1;
  double n_cert_tol = 0.02;
  int samples = 2000;
  /// 0 means unlimited
  long max_paths = 0;
  /// wall-clock budget in seconds, 0 means none (non-deterministic when set)
  double time_budget = 0.0;
  /// 0 means unlimited
  int max_nodes = 0;
  InfoVariant variant = InfoVariant::ave;
  std::optional<double> sigma_worst;
  double trace_cap = 1e3;
  std::optional<int> goal_component;

  bool operator==(const PlannerParams & other) const = default;
};

struct RobotConfig
{
  RobotState initial_pose;
  Matrix3 initial_cov = Matrix3::Identity() * 0.01;
  double speed = 0.5;
  double radius = 0.05;
  ControllerGains gains;

  bool operator==(const RobotConfig & other) const = default;
};

struct EpisodeConfig
{
  int stages = 2;
  double dt = 0.1;
  double dwell_cap = 10.0;   // s
  double settle_time = 3.0;  // s
  int nees_window = 10;

  bool operator==(const EpisodeConfig & other) const = default;
};

struct Scenario
{
  static constexpr int kSchemaVersion = 1;

  int schema_version = kSchemaVersion;
  std::string name;
  Bounds bounds;
  std::vector<Polygon> obstacles;
  std::vector<Landmark> landmarks;
  LocalizationRegion lra;
  GridSpec grid;
  SensorModel sensor;
  ProcessNoise noise;
  RobotConfig robot;
  PrmConfig prm;
  PlannerParams planner;
  EpisodeConfig episode;
  std::uint64_t seed = 1;

  InterestGrid prior_grid() const;
  EdgeModel edge_model() const;
  double sigma_best() const { return lra.gamma / 3.0; }
  double sigma_worst() const { return planner.sigma_worst.value_or(planner.trace_cap / 3.0); }

  bool operator==(const Scenario & other) const = default;
};

class ScenarioError : public std::runtime_error
{
public:
  ScenarioError(const std::string & field, const std::string & message)
  : std::runtime_error(field + ": " + message), field_(field)
  {
  }
  const std::string & field() const { return field_; }

private:
  std::string field_;
};

/// Throws ScenarioError naming the first offending field.
void validate(const Scenario & scenario);

/// Centroid of the LRA component nearest to `from`, or of `planner.goal_component` when set.
Point2 goal_point(const Scenario & scenario, const Point2 & from);

/// Expected-measurement count above which a cell is scored with the entropy floor;
/// +inf when the sensor never reaches the floor.
double certainty_threshold(const SensorModel & sensor, double tol);

}  // namespace pie

#endif  // PIE_SCENARIO_HPP_
