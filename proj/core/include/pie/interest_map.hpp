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

#ifndef PIE_INTEREST_MAP_HPP_
#define PIE_INTEREST_MAP_HPP_

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pie/geometry.hpp"

namespace pie
{

/// Binary "interesting / not interesting" sensor.
///
/// theta = P(z=1 | c=1) (detection), phi = P(z=0 | c=0) (correct rejection).
struct SensorModel
{
  double theta = 0.75;
  double phi = 0.75;
  double range = 2.0;   // m
  double fov = 1.658;   // half-angle, rad
  double rate = 10.0;   // Hz

  /// Symmetric channel with the worse of the two error rates.
  SensorModel worst_case() const;

  bool operator==(const SensorModel & other) const = default;
};

/// Independent Bernoulli cells over a rectangular region.
class InterestGrid
{
public:
  InterestGrid() = default;
  InterestGrid(Point2 origin, double resolution, int width, int height, double prior);

  /// Grid exactly covering `bounds`; throws if the bounds are not a whole number of cells.
  static InterestGrid covering(const Bounds & bounds, double resolution, double prior);

  const Point2 & origin() const { return origin_; }
  double resolution() const { return resolution_; }
  int width() const { return width_; }
  int height() const { return height_; }
  int size() const { return width_ * height_; }

  int index(int ix, int iy) const { return iy * width_ + ix; }
  Point2 center(int cell) const;
  /// Cell containing `p`, or -1 outside the grid.
  int cell_at(const Point2 & p) const;

  double prob(int cell) const { return probs_[static_cast<std::size_t>(cell)]; }
  void set_prob(int cell, double p);
  std::span<const double> probs() const { return probs_; }

  /// Sum of per-cell binary entropies (nats).
  double total_entropy() const;

  bool operator==(const InterestGrid & other) const = default;

private:
  Point2 origin_ = Point2::Zero();
  double resolution_ = 1.0;
  int width_ = 0;
  int height_ = 0;
  std::vector<double> probs_;
};

/// Expected measurement count per cell, sorted by cell index.
struct VisibilityProfile
{
  std::vector<std::pair<int, double>> counts;

  double count(int cell) const;
  bool empty() const { return counts.empty(); }
  /// Adds every count into a dense per-cell buffer.
  void accumulate_into(std::span<double> dense) const;
  /// Merges another profile into this one.
  void merge(const VisibilityProfile & other);
  VisibilityProfile scaled(double factor) const;

  bool operator==(const VisibilityProfile & other) const = default;
};

/// Pose sample of a reference trajectory.
struct TimedPose
{
  double t = 0.0;
  Point2 position = Point2::Zero();
  double heading = 0.0;
};

/// Piecewise-linear constant-speed trajectory through waypoints; heading follows travel direction.
std::vector<TimedPose> constant_speed_trajectory(std::span<const Point2> waypoints, double speed);

double cell_entropy(double p);

double posterior_update(double p, bool z, const SensorModel & sensor);

/// Exact E_Z[H(c | Z_1..Z_n)] for n i.i.d. measurements; O(n).
double expected_entropy(double p, int n, double theta, double phi);
double expected_entropy(double p, int n, const SensorModel & sensor);

/// (1/2) ln(e/2) nats.
double entropy_floor();

class NonConvergentSensor : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Smallest n with expected_entropy(p, n) <= entropy_floor() + tol.
int crossing_point(double p, const SensorModel & sensor, double tol, int cap = 10000);

/// Bounded per-cell information gain used by the planners.
///
/// Cells with at least `n_cert` expected measurements use the entropy floor;
/// others use the exact expected entropy at the rounded count under the worst-case
/// symmetric channel. Never negative.
double bounded_cell_gain(double p, double count, const SensorModel & sensor, double n_cert);

/// Cells whose center is within range and field of view of the pose and not occluded.
void visible_cells(
  const Point2 & pos, double heading, const InterestGrid & grid, const SensorModel & sensor,
  std::span<const Polygon> occluders, std::vector<int> & out);

/// Expected measurement counts for every cell whose centroid is within range
/// and field of view (and not occluded) along the trajectory.
VisibilityProfile visibility_profile(
  std::span<const TimedPose> trajectory, const InterestGrid & grid, const SensorModel & sensor,
  std::span<const Polygon> occluders = {}, double max_substep = 0.01);

VisibilityProfile visibility_profile(
  std::span<const Point2> waypoints, const InterestGrid & grid, const SensorModel & sensor,
  double speed, std::span<const Polygon> occluders = {});

}  // namespace pie

#endif  // PIE_INTEREST_MAP_HPP_
