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

#include "pie/interest_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace pie
{
namespace
{

constexpr double kLogEps = 1e-12;

void check_probability(double p, const char * what)
{
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

double wrap(double a)
{
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

// log(1 + exp(x)) without overflow
double softplus(double x)
{
  if (x > 0.0) {
    return x + std::log1p(std::exp(-x));
  }
  return std::log1p(std::exp(x));
}

// count * log(x) with 0 * log(0) := 0
double weighted_log(int count, double x)
{
  return count == 0 ? 0.0 : count * std::log(x);
}

double log_add(double a, double b)
{
  if (a == -std::numeric_limits<double>::infinity()) {
    return b;
  }
  if (b == -std::numeric_limits<double>::infinity()) {
    return a;
  }
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// Binary entropy of the posterior with log-odds `logit`.
double entropy_from_logit(double logit)
{
  if (std::isinf(logit)) {
    return 0.0;
  }
  const double q = 1.0 / (1.0 + std::exp(-logit));
  return q * softplus(-logit) + (1.0 - q) * softplus(logit);
}

}  // namespace

SensorModel SensorModel::worst_case() const
{
  SensorModel s = *this;
  s.theta = std::min(theta, phi);
  s.phi = s.theta;
  return s;
}

InterestGrid::InterestGrid(Point2 origin, double resolution, int width, int height, double prior)
: origin_(std::move(origin)), resolution_(resolution), width_(width), height_(height)
{
  if (resolution <= 0.0 || width <= 0 || height <= 0) {
    throw std::invalid_argument("InterestGrid: resolution and dimensions must be positive");
  }
  check_probability(prior, "prior");
  probs_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), prior);
}

InterestGrid InterestGrid::covering(const Bounds & bounds, double resolution, double prior)
{
  const double wx = bounds.width() / resolution;
  const double wy = bounds.height() / resolution;
  const double nx = std::round(wx);
  const double ny = std::round(wy);
  if (std::abs(wx - nx) > 1e-9 || std::abs(wy - ny) > 1e-9) {
    throw std::invalid_argument("grid resolution does not tile the scenario bounds exactly");
  }
  return InterestGrid(bounds.min, resolution, static_cast<int>(nx), static_cast<int>(ny), prior);
}

Point2 InterestGrid::center(int cell) const
{
  const int ix = cell % width_;
  const int iy = cell / width_;
  return origin_ + Point2((ix + 0.5) * resolution_, (iy + 0.5) * resolution_);
}

int InterestGrid::cell_at(const Point2 & p) const
{
  const double fx = (p.x() - origin_.x()) / resolution_;
  const double fy = (p.y() - origin_.y()) / resolution_;
  if (fx < 0.0 || fy < 0.0 || fx >= width_ || fy >= height_) {
    return -1;
  }
  return index(static_cast<int>(fx), static_cast<int>(fy));
}

void InterestGrid::set_prob(int cell, double p)
{
  check_probability(p, "cell probability");
  probs_.at(static_cast<std::size_t>(cell)) = p;
}

double InterestGrid::total_entropy() const
{
  double h = 0.0;
  for (const double p : probs_) {
    h += cell_entropy(p);
  }
  return h;
}

double VisibilityProfile::count(int cell) const
{
  const auto it = std::lower_bound(
    counts.begin(), counts.end(), cell, [](const auto & e, int c) { return e.first < c; });
  return (it != counts.end() && it->first == cell) ? it->second : 0.0;
}

void VisibilityProfile::accumulate_into(std::span<double> dense) const
{
  for (const auto & [cell, n] : counts) {
    dense[static_cast<std::size_t>(cell)] += n;
  }
}

void VisibilityProfile::merge(const VisibilityProfile & other)
{
  std::vector<std::pair<int, double>> out;
  out.reserve(counts.size() + other.counts.size());
  auto a = counts.begin();
  auto b = other.counts.begin();
  while (a != counts.end() || b != other.counts.end()) {
    if (b == other.counts.end() || (a != counts.end() && a->first < b->first)) {
      out.push_back(*a++);
    } else if (a == counts.end() || b->first < a->first) {
      out.push_back(*b++);
    } else {
      out.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  counts = std::move(out);
}

VisibilityProfile VisibilityProfile::scaled(double factor) const
{
  VisibilityProfile out = *this;
  for (auto & entry : out.counts) {
    entry.second *= factor;
  }
  return out;
}

std::vector<TimedPose> constant_speed_trajectory(std::span<const Point2> waypoints, double speed)
{
  if (speed <= 0.0) {
    throw std::invalid_argument("trajectory speed must be positive");
  }
  std::vector<TimedPose> out;
  double t = 0.0;
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    double heading = 0.0;
    if (i + 1 < waypoints.size()) {
      const Point2 d = waypoints[i + 1] - waypoints[i];
      heading = std::atan2(d.y(), d.x());
    } else if (!out.empty()) {
      heading = out.back().heading;
    }
    if (i > 0) {
      t += (waypoints[i] - waypoints[i - 1]).norm() / speed;
      // arriving pose keeps the heading of the segment it ends
      out.push_back({t, waypoints[i], out.back().heading});
      if (i + 1 < waypoints.size()) {
        out.push_back({t, waypoints[i], heading});
      }
    } else {
      out.push_back({t, waypoints[i], heading});
    }
  }
  return out;
}

double cell_entropy(double p)
{
  check_probability(p, "p");
  if (p == 0.0 || p == 1.0) {
    return 0.0;
  }
  const double q = std::clamp(p, kLogEps, 1.0 - kLogEps);
  return -p * std::log(q) - (1.0 - p) * std::log1p(-q);
}

double posterior_update(double p, bool z, const SensorModel & sensor)
{
  check_probability(p, "p");
  const double like1 = z ? sensor.theta : 1.0 - sensor.theta;
  const double like0 = z ? 1.0 - sensor.phi : sensor.phi;
  if (like1 == like0) {
    return p;
  }
  const double num = p * like1;
  const double den = num + (1.0 - p) * like0;
  if (den <= 0.0) {
    return p;
  }
  return num / den;
}

double expected_entropy(double p, int n, double theta, double phi)
{
  check_probability(p, "p");
  check_probability(theta, "theta");
  check_probability(phi, "phi");
  if (n < 0) {
    throw std::domain_error("measurement count must be non-negative");
  }
  if (n == 0 || p == 0.0 || p == 1.0) {
    return cell_entropy(p);
  }
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    // joint log-likelihood of one particular sequence with k ones, for c = 1 and c = 0
    const double log_a = log_p + weighted_log(k, theta) + weighted_log(n - k, 1.0 - theta);
    const double log_b = log_q + weighted_log(k, 1.0 - phi) + weighted_log(n - k, phi);
    const double log_seq = log_add(log_a, log_b);
    if (log_seq == -std::numeric_limits<double>::infinity()) {
      continue;
    }
    const double log_choose =
      std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    const double weight = std::exp(log_choose + log_seq);
    if (weight == 0.0) {
      continue;
    }
    double logit = log_a - log_b;
    if (std::isnan(logit)) {
      logit = 0.0;
    }
    total += weight * entropy_from_logit(logit);
  }
  return total;
}

double expected_entropy(double p, int n, const SensorModel & sensor)
{
  return expected_entropy(p, n, sensor.theta, sensor.phi);
}

double entropy_floor()
{
  return 0.5 * (1.0 - std::numbers::ln2);
}

int crossing_point(double p, const SensorModel & sensor, double tol, int cap)
{
  const double target = entropy_floor() + tol;
  if (sensor.theta == 1.0 - sensor.phi && cell_entropy(p) > target) {
    throw NonConvergentSensor("non-convergent sensor: measurements carry no information");
  }
  for (int n = 0; n <= cap; ++n) {
    if (expected_entropy(p, n, sensor) <= target) {
      return n;
    }
  }
  throw NonConvergentSensor(
    "non-convergent sensor: expected entropy stays above the floor for " + std::to_string(cap) +
    " samples");
}

double bounded_cell_gain(double p, double count, const SensorModel & sensor, double n_cert)
{
  if (count <= 0.0) {
    return 0.0;
  }
  const double h = cell_entropy(p);
  if (count >= n_cert) {
    return std::max(0.0, h - entropy_floor());
  }
  const int n = static_cast<int>(std::floor(count + 0.5));
  return std::max(0.0, h - expected_entropy(p, n, sensor.worst_case()));
}

void visible_cells(
  const Point2 & pos, double heading, const InterestGrid & grid, const SensorModel & sensor,
  std::span<const Polygon> occluders, std::vector<int> & out)
{
  out.clear();
  const double res = grid.resolution();
  const double range2 = sensor.range * sensor.range;
  const int ix0 = std::max(0, static_cast<int>(std::floor((pos.x() - sensor.range - grid.origin().x()) / res)));
  const int iy0 = std::max(0, static_cast<int>(std::floor((pos.y() - sensor.range - grid.origin().y()) / res)));
  const int ix1 = std::min(grid.width() - 1, static_cast<int>(std::floor((pos.x() + sensor.range - grid.origin().x()) / res)));
  const int iy1 = std::min(grid.height() - 1, static_cast<int>(std::floor((pos.y() + sensor.range - grid.origin().y()) / res)));
  for (int iy = iy0; iy <= iy1; ++iy) {
    for (int ix = ix0; ix <= ix1; ++ix) {
      const int cell = grid.index(ix, iy);
      const Point2 c = grid.center(cell);
      const Point2 d = c - pos;
      const double d2 = d.squaredNorm();
      if (d2 > range2) {
        continue;
      }
      if (d2 > 0.0 && std::abs(wrap(std::atan2(d.y(), d.x()) - heading)) > sensor.fov) {
        continue;
      }
      if (!segment_is_clear(occluders, pos, c, 0.0)) {
        continue;
      }
      out.push_back(cell);
    }
  }
}

VisibilityProfile visibility_profile(
  std::span<const TimedPose> trajectory, const InterestGrid & grid, const SensorModel & sensor,
  std::span<const Polygon> occluders, double max_substep)
{
  std::vector<double> dense(static_cast<std::size_t>(grid.size()), 0.0);
  std::vector<int> cells;
  auto observe = [&](const Point2 & pos, double heading, double dt) {
    visible_cells(pos, heading, grid, sensor, occluders, cells);
    for (const int cell : cells) {
      dense[static_cast<std::size_t>(cell)] += dt * sensor.rate;
    }
  };

  for (std::size_t i = 0; i + 1 < trajectory.size(); ++i) {
    const auto & a = trajectory[i];
    const auto & b = trajectory[i + 1];
    const double duration = b.t - a.t;
    if (duration <= 0.0) {
      continue;
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(duration / max_substep - 1e-9)));
    const double h = duration / steps;
    const double turn = wrap(b.heading - a.heading);
    for (int s = 0; s < steps; ++s) {
      const double f = (s + 0.5) / steps;
      observe(a.position + f * (b.position - a.position), a.heading + f * turn, h);
    }
  }

  VisibilityProfile out;
  for (int cell = 0; cell < grid.size(); ++cell) {
    if (dense[static_cast<std::size_t>(cell)] > 0.0) {
      out.counts.emplace_back(cell, dense[static_cast<std::size_t>(cell)]);
    }
  }
  return out;
}

VisibilityProfile visibility_profile(
  std::span<const Point2> waypoints, const InterestGrid & grid, const SensorModel & sensor,
  double speed, std::span<const Polygon> occluders)
{
  const auto traj = constant_speed_trajectory(waypoints, speed);
  return visibility_profile(traj, grid, sensor, occluders);
}

}  // namespace pie
