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

#include "pie/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace pie
{
namespace
{

using Matrix6 = Eigen::Matrix<double, 6, 6>;

Matrix3 symmetrized(const Matrix3 & m)
{
  return 0.5 * (m + m.transpose());
}

}  // namespace

double wrap_angle(double a)
{
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

bool Landmark::sees(const Point2 & p) const
{
  return (position - p).norm() <= detect_range;
}

Matrix2 ProcessNoise::covariance() const
{
  Matrix2 q = Matrix2::Zero();
  q(0, 0) = v_std * v_std;
  q(1, 1) = omega_std * omega_std;
  return q;
}

Matrix3 EdgeAggregates::apply(const Matrix3 & cov) const
{
  // (cov^-1 + M)^-1 == (I + cov M)^-1 cov, which stays defined for singular cov
  const Matrix3 posterior = (Matrix3::Identity() + cov * Minfo).partialPivLu().solve(cov);
  return symmetrized(L + G * symmetrized(posterior) * G.transpose());
}

RobotState propagate(
  const RobotState & state, double v, double omega, double dt, const std::optional<Control> & noise)
{
  if (noise) {
    v += noise->v;
    omega += noise->omega;
  }
  return {
    state.x + v * std::cos(state.psi) * dt, state.y + v * std::sin(state.psi) * dt,
    wrap_angle(state.psi + omega * dt)};
}

Control track(
  const RobotState & state, const RobotState & reference, const ControllerGains & gains,
  const Control & feedforward)
{
  const double dx = reference.x - state.x;
  const double dy = reference.y - state.y;
  const double c = std::cos(state.psi);
  const double s = std::sin(state.psi);
  const double e_x = c * dx + s * dy;
  const double e_y = -s * dx + c * dy;
  const double e_psi = wrap_angle(reference.psi - state.psi);

  double v = feedforward.v * std::cos(e_psi) + gains.k_x * e_x;
  double omega = feedforward.omega + feedforward.v * gains.k_y * e_y + gains.k_psi * std::sin(e_psi);
  v = std::clamp(v, 0.0, gains.v_max);
  omega = std::clamp(omega, -gains.omega_max, gains.omega_max);
  if (std::abs(v) < 1e-12) {
    v = 0.0;
  }
  if (std::abs(omega) < 1e-12) {
    omega = 0.0;
  }
  return {v, omega};
}

Matrix3 ensure_positive_definite(const Matrix3 & cov)
{
  Matrix3 sym = symmetrized(cov);
  if (!sym.allFinite()) {
    throw std::runtime_error("covariance is not finite");
  }
  if (sym.llt().info() == Eigen::Success) {
    return sym;
  }
  sym += 1e-12 * Matrix3::Identity();
  if (sym.llt().info() != Eigen::Success) {
    throw std::runtime_error("covariance lost positive definiteness");
  }
  return sym;
}

BeliefState ekf_predict(
  const BeliefState & belief, double v, double omega, double dt, const Matrix2 & q_proc)
{
  const double psi = belief.mean.psi;
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  Matrix3 f = Matrix3::Identity();
  f(0, 2) = -v * s * dt;
  f(1, 2) = v * c * dt;
  Eigen::Matrix<double, 3, 2> vj = Eigen::Matrix<double, 3, 2>::Zero();
  vj(0, 0) = c * dt;
  vj(1, 0) = s * dt;
  vj(2, 1) = dt;

  BeliefState out;
  out.mean = propagate(belief.mean, v, omega, dt);
  out.cov = ensure_positive_definite(f * belief.cov * f.transpose() + vj * q_proc * vj.transpose());
  return out;
}

RangeBearing predict_measurement(const RobotState & state, const Point2 & landmark)
{
  const double dx = landmark.x() - state.x;
  const double dy = landmark.y() - state.y;
  return {std::hypot(dx, dy), wrap_angle(std::atan2(dy, dx) - state.psi)};
}

Eigen::Matrix<double, 2, 3> measurement_jacobian(const RobotState & state, const Point2 & landmark)
{
  const double dx = landmark.x() - state.x;
  const double dy = landmark.y() - state.y;
  const double r2 = dx * dx + dy * dy;
  const double r = std::sqrt(r2);
  Eigen::Matrix<double, 2, 3> h;
  h << -dx / r, -dy / r, 0.0,
        dy / r2, -dx / r2, -1.0;
  return h;
}

Matrix3 observation_information(const RobotState & state, const Landmark & landmark)
{
  if ((landmark.position - state.position()).norm() < 1e-9) {
    return Matrix3::Zero();
  }
  const auto h = measurement_jacobian(state, landmark.position);
  Matrix2 r_inv = Matrix2::Zero();
  r_inv(0, 0) = 1.0 / (landmark.range_noise_std * landmark.range_noise_std);
  r_inv(1, 1) = 1.0 / (landmark.bearing_noise_std * landmark.bearing_noise_std);
  return symmetrized(h.transpose() * r_inv * h);
}

UpdateOutcome ekf_update_checked(
  const BeliefState & belief, const Landmark & landmark, const RangeBearing & z)
{
  UpdateOutcome out{belief, false, 0.0};
  if ((landmark.position - belief.mean.position()).norm() < 1e-9) {
    return out;
  }
  const auto predicted = predict_measurement(belief.mean, landmark.position);
  const auto h = measurement_jacobian(belief.mean, landmark.position);
  Matrix2 r = Matrix2::Zero();
  r(0, 0) = landmark.range_noise_std * landmark.range_noise_std;
  r(1, 1) = landmark.bearing_noise_std * landmark.bearing_noise_std;

  const Eigen::Vector2d innovation(z.range - predicted.range, wrap_angle(z.bearing - predicted.bearing));
  const Matrix2 s = h * belief.cov * h.transpose() + r;
  const Eigen::LDLT<Matrix2> s_ldlt(s);
  out.mahalanobis2 = innovation.dot(s_ldlt.solve(innovation));
  if (out.mahalanobis2 > kInnovationGate) {
    return out;
  }
  const Eigen::Matrix<double, 3, 2> k = s_ldlt.solve(h * belief.cov).transpose();
  const Matrix3 i_kh = Matrix3::Identity() - k * h;
  out.belief.mean = RobotState::from_vector(belief.mean.vector() + k * innovation);
  out.belief.cov =
    ensure_positive_definite(i_kh * belief.cov * i_kh.transpose() + k * r * k.transpose());
  out.accepted = true;
  return out;
}

BeliefState ekf_update(const BeliefState & belief, const Landmark & landmark, const RangeBearing & z)
{
  return ekf_update_checked(belief, landmark, z).belief;
}

int edge_step_count(double length, const EdgeModel & model)
{
  if (length <= 1e-12) {
    return 0;
  }
  return std::max(1, static_cast<int>(std::ceil(length / (model.speed * model.dt) - 1e-9)));
}

std::vector<RobotState> edge_reference(const Point2 & from, const Point2 & to, const EdgeModel & model)
{
  const Point2 d = to - from;
  const int steps = edge_step_count(d.norm(), model);
  const double heading = std::atan2(d.y(), d.x());
  std::vector<RobotState> poses;
  poses.reserve(static_cast<std::size_t>(steps));
  for (int k = 1; k <= steps; ++k) {
    const Point2 p = from + (static_cast<double>(k) / steps) * d;
    poses.push_back({p.x(), p.y(), heading});
  }
  return poses;
}

EdgeAggregates edge_aggregates(
  const Point2 & from, const Point2 & to, std::span<const Landmark> landmarks,
  const EdgeModel & model)
{
  const Point2 d = to - from;
  const double length = d.norm();
  const int steps = edge_step_count(length, model);
  if (steps == 0) {
    return {};
  }
  const double heading = std::atan2(d.y(), d.x());
  const double v = length / (steps * model.dt);
  const Matrix2 q = model.noise.covariance();

  // Covariance maps X Y^-1 -> (A X + B)(C X + D)^-1 compose by matrix product.
  Matrix6 transfer = Matrix6::Identity();
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  Matrix3 f = Matrix3::Identity();
  f(0, 2) = -v * s * model.dt;
  f(1, 2) = v * c * model.dt;
  Eigen::Matrix<double, 3, 2> vj = Eigen::Matrix<double, 3, 2>::Zero();
  vj(0, 0) = c * model.dt;
  vj(1, 0) = s * model.dt;
  vj(2, 1) = model.dt;
  const Matrix3 q_step = vj * q * vj.transpose();
  const Matrix3 f_inv_t = f.inverse().transpose();

  Matrix6 predict = Matrix6::Zero();
  predict.topLeftCorner<3, 3>() = f;
  predict.topRightCorner<3, 3>() = q_step * f_inv_t;
  predict.bottomRightCorner<3, 3>() = f_inv_t;

  for (const auto & pose : edge_reference(from, to, model)) {
    Matrix3 info = Matrix3::Zero();
    for (const auto & lm : landmarks) {
      if (lm.sees(pose.position())) {
        info += observation_information(pose, lm);
      }
    }
    Matrix6 update = Matrix6::Identity();
    update.bottomLeftCorner<3, 3>() = info;
    transfer = update * predict * transfer;
  }

  const Matrix3 b = transfer.topRightCorner<3, 3>();
  const Matrix3 cc = transfer.bottomLeftCorner<3, 3>();
  const Matrix3 dd = transfer.bottomRightCorner<3, 3>();
  const auto d_lu = dd.partialPivLu();
  EdgeAggregates agg;
  agg.G = d_lu.inverse().transpose();
  agg.L = symmetrized(b * d_lu.inverse());
  agg.Minfo = symmetrized(d_lu.solve(cc));
  return agg;
}

}  // namespace pie
