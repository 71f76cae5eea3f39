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

#ifndef PIE_GPIE_HPP_
#define PIE_GPIE_HPP_

#include <span>
#include <string>
#include <vector>

#include "pie/feasibility.hpp"
#include "pie/interest_map.hpp"
#include "pie/roadmap.hpp"
#include "pie/scenario.hpp"

namespace pie
{

struct PlanResult
{
  std::vector<int> best_path;
  /// planner objective of best_path (G-PIE: bounded reward; RH-PIE: local + tail)
  double best_reward = 0.0;
  /// bounded expected entropy reduction of the whole best_path (nats)
  double expected_reduction = 0.0;
  double lf_probability = 0.0;
  bool exhaustive = true;
  long paths_evaluated = 0;
  long paths_feasible = 0;
  /// wall-clock seconds
  double elapsed = 0.0;
  /// largest lf_probability among evaluated paths
  double max_lf_probability = 0.0;
  bool suboptimal_tail = false;
  std::string diagnostic;

  bool found() const { return !best_path.empty(); }
};

/// Summed visibility of the directed edges along `path`, as a dense per-cell buffer.
std::vector<double> path_counts(const Roadmap & roadmap, std::span<const int> path, int cells);

/// Lower bound on the expected entropy reduction of traversing `path`.
double path_reward(
  const Roadmap & roadmap, std::span<const int> path, const InterestGrid & grid,
  const SensorModel & sensor, double n_cert);

/// Per-cell bounded gains of a dense count buffer.
double counts_reward(
  std::span<const double> counts, const InterestGrid & grid, const SensorModel & sensor,
  double n_cert);

/// Strict ordering used by both planners: higher reward, then fewer vertices, then
/// lexicographically smaller vertex sequence.
bool better_candidate(
  double reward, std::span<const int> path, double best_reward, std::span<const int> best_path);

/// Exhaustive search over simple start-goal paths for the best localizably feasible one.
PlanResult plan_gpie(
  const Roadmap & roadmap, const BeliefState & initial, const InterestGrid & grid,
  const Scenario & scenario);

}  // namespace pie

#endif  // PIE_GPIE_HPP_
