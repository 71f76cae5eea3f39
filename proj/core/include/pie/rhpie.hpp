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

#ifndef PIE_RHPIE_HPP_
#define PIE_RHPIE_HPP_

#include <span>
#include <stdexcept>
#include <vector>

#include "pie/gpie.hpp"
#include "pie/interest_map.hpp"
#include "pie/roadmap.hpp"
#include "pie/scenario.hpp"
#include "pie/vehicle.hpp"

namespace pie
{

/// Lower clamp keeping every pose penalty strictly positive.
inline constexpr double kMinPosePenalty = 1e-9;

/// Growth bound of the largest covariance eigenvalue across an edge, relative to the
/// best attainable covariance. Throws std::domain_error when G is singular.
double b_pos_edge(const EdgeAggregates & edge, double sigma_worst, double sigma_best);

/// Path-independent edge penalties and rewards, indexed by Roadmap::directed_index.
struct TailWeights
{
  std::vector<double> b_pos;
  std::vector<double> b_info_over;
  std::vector<double> b_info_under;
  std::vector<double> b_info_ave;

  const std::vector<double> & b_info(InfoVariant v) const;
  std::size_t size() const { return b_pos.size(); }
};

/// Edge owning each grid cell: nearest undirected edge segment to the cell center,
/// ties to the lower edge index. -1 for an edgeless roadmap.
std::vector<int> voronoi_assignment(const Roadmap & roadmap, const InterestGrid & grid);

TailWeights compute_tail_weights(
  const Roadmap & roadmap, const InterestGrid & grid, const SensorModel & sensor, double n_cert,
  double sigma_worst, double sigma_best);

/// Largest beta keeping every edge weight non-negative.
double beta_max(std::span<const double> b_pos, std::span<const double> b_info);

/// w(e) = (1 - beta) b_pos(e) - beta b_info(e)
std::vector<double> edge_weights(
  std::span<const double> b_pos, std::span<const double> b_info, double beta);

class TailUnreachable : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct TailPath
{
  std::vector<int> path;
  /// minus the summed weight along the path
  double r_tail = 0.0;
  /// some weight was negative, so the label-setting search may have missed the optimum
  bool suboptimal = false;
};

/// Label-setting shortest path from `from` to `goal` over directed weights, skipping
/// vertices flagged in `blocked` (`from` itself is never blocked).
TailPath tail_path(
  const Roadmap & roadmap, std::span<const double> weights, int from, int goal,
  std::span<const char> blocked = {});

enum class TailBookkeeping
{
  /// head reward plus the scalarized tail value
  scalarized,
  /// bounded reward of the whole concatenated path
  exact,
};

/// Receding-horizon search: every simple head of 1..horizon edges from the start,
/// completed by a tail search to the goal and checked for localizable feasibility.
PlanResult plan_rhpie(
  const Roadmap & roadmap, const BeliefState & initial, const InterestGrid & grid,
  const Scenario & scenario, TailBookkeeping bookkeeping = TailBookkeeping::scalarized);

}  // namespace pie

#endif  // PIE_RHPIE_HPP_
