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

#ifndef PIE_VEHICLE_HPP_
#define PIE_VEHICLE_HPP_

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pie/geometry.hpp"

namespace pie
{

using Matrix2 = Eigen::Matrix2d;
using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

struct RobotState
{
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;

  Point2 position() const { return {x, y}; }
  Vector3 vector() const { return {x, y, psi}; }
  static RobotState from_vector(const Vector3 & v) { return {v.x(), v.y(), wrap_angle(v.z())}; }

  bool operator==(const RobotState & other) const = default;
};

struct BeliefState
{
  RobotState mean;
  Matrix3 cov = Matrix3::Identity();

  bool operator==(const BeliefState & other) const = default;
};

struct Landmark
{
  int id = 0;
  Point2 position = Point2::Zero();
  double range_noise_std = 0.1;    // m
  double bearing_noise_std = 0.05; // rad
  double detect_range = 2.0;       // m

  bool sees(const Point2 & p) const;
  bool operator==(const Landmark & other) const = default;
};

struct Control
{
  double v = 0.0;
  double omega = 0.0;
};

struct ControllerGains
{
  double k_x = 1.0;
  double k_y = 4.0;
  double k_psi = 2.0;
  double v_max = 1.0;
  double omega_max = 1.5;

  bool operator==(const ControllerGains & other) const = default;
};

/// Standard deviations of the additive noise on the commanded (v, omega).
struct ProcessNoise
{
  double v_std = 0.05;
  double omega_std = 0.05;

  Matrix2 covariance() const;
  bool operator==(const ProcessNoise & other) const = default;
};

struct RangeBearing
{
  double range = 0.0;
  double bearing = 0.0;
};

/// One-step covariance transfer along an edge:
///   cov_out = L + G (cov_in^-1 + Minfo)^-1 G^T
struct EdgeAggregates
{
  Matrix3 G = Matrix3::Identity();
  Matrix3 L = Matrix3::Zero();
  Matrix3 Minfo = Matrix3::Zero();

  Matrix3 apply(const Matrix3 & cov) const;
};

/// Discretization used when linearizing along a reference edge.
struct EdgeModel
{
  double dt = 0.1;
  double speed = 0.5;
  ProcessNoise noise;
};

/// Unicycle step; `noise` is an additive draw on (v, omega) applied before integration.
RobotState propagate(
  const RobotState & state, double v, double omega, double dt,
  const std::optional<Control> & noise = std::nullopt);

/// Kinematic tracking law in the robot frame, saturated to v in [0, v_max], |omega| <= omega_max.
/// `feedforward` carries the reference's own (v, omega).
Control track(
  const RobotState & state, const RobotState & reference, const ControllerGains & gains,
  const Control & feedforward = {});

/// Throws std::runtime_error when the matrix cannot be made positive definite.
Matrix3 ensure_positive_definite(const Matrix3 & cov);

BeliefState ekf_predict(
  const BeliefState & belief, double v, double omega, double dt, const Matrix2 & q_proc);

RangeBearing predict_measurement(const RobotState & state, const Point2 & landmark);
Eigen::Matrix<double, 2, 3> measurement_jacobian(const RobotState & state, const Point2 & landmark);
/// H^T R^-1 H of a single range-bearing observation at `state`.
Matrix3 observation_information(const RobotState & state, const Landmark & landmark);

/// chi-square(2) 0.999 quantile
inline constexpr double kInnovationGate = 13.8;

struct UpdateOutcome
{
  BeliefState belief;
  bool accepted = false;
  double mahalanobis2 = 0.0;
};

UpdateOutcome ekf_update_checked(
  const BeliefState & belief, const Landmark & landmark, const RangeBearing & z);

/// EKF range-bearing update; gated measurements leave the belief unchanged.
BeliefState ekf_update(const BeliefState & belief, const Landmark & landmark, const RangeBearing & z);

/// Number of filter steps used to traverse a segment of the given length.
int edge_step_count(double length, const EdgeModel & model);

/// Reference poses after each step along [from, to] (excluding `from`).
std::vector<RobotState> edge_reference(const Point2 & from, const Point2 & to, const EdgeModel & model);

/// Aggregate transfer matrices of the frozen-linearization EKF along [from, to]:
/// each step predicts with the noiseless reference controls, then fuses every
/// landmark in range of the reference pose.
EdgeAggregates edge_aggregates(
  const Point2 & from, const Point2 & to, std::span<const Landmark> landmarks,
  const EdgeModel & model);

}  // namespace pie

#endif  // PIE_VEHICLE_HPP_
