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

#include "pie/feasibility.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "pie/random.hpp"

namespace pie
{

PathBelief simulate_path(
  const Roadmap & roadmap, std::span<const int> path, const BeliefState & initial, double trace_cap)
{
  PathBelief out;
  out.path.assign(path.begin(), path.end());
  out.terminal = initial;
  if (path.empty()) {
    return out;
  }
  out.beliefs.push_back(initial);
  BeliefState b = initial;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Point2 & from = roadmap.vertices.at(static_cast<std::size_t>(path[i - 1]));
    const Point2 & to = roadmap.vertices.at(static_cast<std::size_t>(path[i]));
    const auto & data = roadmap.directed(path[i - 1], path[i]);
    b.cov = data.aggregates.apply(b.cov);
    b.mean = RobotState{to.x(), to.y(), std::atan2(to.y() - from.y(), to.x() - from.x())};
    if (!b.cov.allFinite() || b.cov.trace() > trace_cap) {
      out.diverged = true;
    }
    out.beliefs.push_back(b);
  }
  out.terminal = b;
  return out;
}

double terminal_probability(
  const BeliefState & terminal, const LocalizationRegion & region, int n_samples, std::uint64_t seed)
{
  if (n_samples < 1) {
    throw std::invalid_argument("terminal_probability needs at least one sample");
  }
  const Matrix2 cov = terminal.cov.topLeftCorner<2, 2>();
  if (!cov.allFinite()) {
    throw std::domain_error("terminal covariance is not finite");
  }
  const Matrix2 sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix2> eig(sym);
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() < -1e-12 * scale) {
    throw std::domain_error("terminal covariance is not positive semi-definite");
  }
  const Matrix2 root =
    eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  const Point2 mean = terminal.mean.position();
  Rng rng(seed);
  int inside = 0;
  for (int i = 0; i < n_samples; ++i) {
    const double z0 = rng.normal();
    const double z1 = rng.normal();
    if (point_in_region(mean + root * Point2{z0, z1}, region)) {
      ++inside;
    }
  }
  return static_cast<double>(inside) / n_samples;
}

std::uint64_t path_seed(std::uint64_t seed, std::span<const int> path)
{
  return hash_sequence(seed, path);
}

PathBelief evaluate_path(
  const Roadmap & roadmap, std::span<const int> path, const BeliefState & initial,
  const Scenario & scenario)
{
  auto pb = simulate_path(roadmap, path, initial, scenario.planner.trace_cap);
  if (pb.diverged || path.empty()) {
    pb.lf_probability = 0.0;
    return pb;
  }
  pb.sample_count = scenario.planner.samples;
  pb.lf_probability = terminal_probability(
    pb.terminal, scenario.lra, scenario.planner.samples, path_seed(scenario.seed, path));
  return pb;
}

}  // namespace pie
