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

#ifndef PIE_FEASIBILITY_HPP_
#define PIE_FEASIBILITY_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "pie/roadmap.hpp"
#include "pie/scenario.hpp"
#include "pie/vehicle.hpp"

namespace pie
{

/// Predicted beliefs along a reference path.
struct PathBelief
{
  std::vector<int> path;
  /// one belief per path vertex
  std::vector<BeliefState> beliefs;
  BeliefState terminal;
  double lf_probability = 0.0;
  int sample_count = 0;
  /// covariance trace exceeded the divergence cap; lf_probability is 0
  bool diverged = false;
};

/// Propagates `initial` along `path` with the cached edge aggregates.
/// The mean follows the reference; each waypoint takes the heading of the edge arriving at it.
/// lf_probability is left unset (see evaluate_path).
PathBelief simulate_path(
  const Roadmap & roadmap, std::span<const int> path, const BeliefState & initial, double trace_cap);

/// Fraction of `n_samples` draws of the terminal (x, y) marginal that land in `region`.
/// Standard error is about sqrt(p (1 - p) / n_samples).
double terminal_probability(
  const BeliefState & terminal, const LocalizationRegion & region, int n_samples, std::uint64_t seed);

/// Seed used for the terminal sampling of a path: fixed per (scenario seed, vertex sequence).
std::uint64_t path_seed(std::uint64_t seed, std::span<const int> path);

/// simulate_path followed by terminal_probability with the scenario's planner settings.
PathBelief evaluate_path(
  const Roadmap & roadmap, std::span<const int> path, const BeliefState & initial,
  const Scenario & scenario);

inline bool is_lf(const PathBelief & belief, double alpha) { return belief.lf_probability >= alpha; }

}  // namespace pie

#endif  // PIE_FEASIBILITY_HPP_
