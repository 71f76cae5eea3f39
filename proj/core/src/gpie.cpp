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

#include "pie/gpie.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace pie
{

std::vector<double> path_counts(const Roadmap & roadmap, std::span<const int> path, int cells)
{
  std::vector<double> dense(static_cast<std::size_t>(cells), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    roadmap.directed(path[i - 1], path[i]).visibility.accumulate_into(dense);
  }
  return dense;
}

double counts_reward(
  std::span<const double> counts, const InterestGrid & grid, const SensorModel & sensor,
  double n_cert)
{
  double r = 0.0;
  for (int c = 0; c < grid.size(); ++c) {
    const double n = counts[static_cast<std::size_t>(c)];
    if (n > 0.0) {
      r += bounded_cell_gain(grid.prob(c), n, sensor, n_cert);
    }
  }
  return r;
}

double path_reward(
  const Roadmap & roadmap, std::span<const int> path, const InterestGrid & grid,
  const SensorModel & sensor, double n_cert)
{
  return counts_reward(path_counts(roadmap, path, grid.size()), grid, sensor, n_cert);
}

bool better_candidate(
  double reward, std::span<const int> path, double best_reward, std::span<const int> best_path)
{
  const double tol = 1e-12 * std::max(1.0, std::max(std::abs(reward), std::abs(best_reward)));
  if (reward > best_reward + tol) {
    return true;
  }
  if (reward < best_reward - tol) {
    return false;
  }
  if (path.size() != best_path.size()) {
    return path.size() < best_path.size();
  }
  return std::lexicographical_compare(path.begin(), path.end(), best_path.begin(), best_path.end());
}

PlanResult plan_gpie(
  const Roadmap & roadmap, const BeliefState & initial, const InterestGrid & grid,
  const Scenario & scenario)
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto & params = scenario.planner;
  const double n_cert = certainty_threshold(scenario.sensor, params.n_cert_tol);

  EnumerationOptions opts;
  opts.max_nodes = params.max_nodes;
  opts.max_paths = params.max_paths;
  if (params.time_budget > 0.0) {
    opts.deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                           std::chrono::duration<double>(params.time_budget));
  }

  PlanResult result;
  const auto stats = enumerate_simple_paths(
    roadmap, roadmap.start_id, roadmap.goal_id, opts, [&](std::span<const int> path) {
      ++result.paths_evaluated;
      const auto pb = evaluate_path(roadmap, path, initial, scenario);
      result.max_lf_probability = std::max(result.max_lf_probability, pb.lf_probability);
      if (!is_lf(pb, params.alpha)) {
        return true;
      }
      ++result.paths_feasible;
      const double r = path_reward(roadmap, path, grid, scenario.sensor, n_cert);
      // the first feasible path is kept even at zero reward
      if (!result.found() || better_candidate(r, path, result.best_reward, result.best_path)) {
        result.best_path.assign(path.begin(), path.end());
        result.best_reward = r;
        result.lf_probability = pb.lf_probability;
      }
      return true;
    });
  result.exhaustive = stats.exhaustive;
  result.expected_reduction = result.best_reward;
  if (!result.found()) {
    std::ostringstream msg;
    msg << "no localizably feasible path among " << result.paths_evaluated
        << " evaluated; max lf_probability " << result.max_lf_probability;
    result.diagnostic = msg.str();
  }
  result.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace pie
