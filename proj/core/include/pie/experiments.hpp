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

#ifndef PIE_EXPERIMENTS_HPP_
#define PIE_EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pie/episode.hpp"
#include "pie/map_generator.hpp"
#include "pie/scenario.hpp"

namespace pie
{

/// Rows of string cells with a header; numbers are formatted with 12 significant digits.
class CsvTable
{
public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  CsvTable & row() { rows_.emplace_back(); return *this; }
  CsvTable & add(double v);
  CsvTable & add(long v);
  CsvTable & add(int v) { return add(static_cast<long>(v)); }
  CsvTable & add(bool v) { return add(static_cast<long>(v ? 1 : 0)); }
  CsvTable & add(std::string v);
  CsvTable & add(const char * v) { return add(std::string(v)); }

  const std::vector<std::string> & header() const { return header_; }
  const std::vector<std::vector<std::string>> & rows() const { return rows_; }
  void write(std::ostream & out) const;
  std::string str() const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_number(double v);

/// Runs body(0..n-1) over a thread pool; each index is handled exactly once.
void parallel_for(int n, const std::function<void(int)> & body, int threads = 0);

struct AchievementRow
{
  double alpha = 0.0;
  int runs = 0;
  int planned = 0;
  /// mean lf_probability of the first-stage plans
  double predicted = 0.0;
  /// fraction of planned runs whose first stage ended inside the LRA
  double realized = 0.0;
  int collisions = 0;
  int inconsistent = 0;
  /// no run produced a feasible plan
  bool flagged = false;
};

/// Predicted versus realized achievement on randomly generated desk maps.
/// Run r uses the same map and noise seed for every alpha.
std::vector<AchievementRow> monte_carlo_achievement(
  const Scenario & base, PlannerKind planner, std::span<const double> alphas, int runs,
  std::uint64_t seed, const DeskMapParams & params = {});
CsvTable achievement_table(std::span<const AchievementRow> rows);

struct SweepRow
{
  double beta = 0.0;
  int horizon = 0;
  int run = 0;
  bool found = false;
  /// bounded expected entropy reduction of the returned path (nats)
  double expected_reduction = 0.0;
  double objective = 0.0;
  double lf_probability = 0.0;
  double beta_max = 0.0;
  bool suboptimal_tail = false;
  long heads = 0;
  int path_vertices = 0;
  double plan_time = 0.0;
};

/// Initial pose of sweep run `run`: run 0 is nominal, others are perturbed by
/// about 5 cm and 1 degree. `attempt` redraws a pose that cannot join the roadmap.
RobotState sweep_initial_pose(const Scenario & scenario, int run, std::uint64_t seed, int attempt = 0);

std::vector<SweepRow> sweep_beta(
  const Scenario & scenario, std::span<const double> betas, int horizon, int runs, std::uint64_t seed);
std::vector<SweepRow> sweep_horizon(
  const Scenario & scenario, std::span<const int> horizons, double beta, int runs, std::uint64_t seed);
/// Wall-clock planning time is excluded unless requested, so the table stays reproducible.
CsvTable sweep_table(std::span<const SweepRow> rows, bool include_timing);

struct BoundRow
{
  std::string relation;
  double theta = 0.0;
  double phi = 0.0;
  int n = 0;
  double expected_entropy = 0.0;
  double floor = 0.0;
};

/// Expected entropy against the floor for phi = theta and phi = theta -/+ 0.1
/// (combinations outside [0.5, 1] are skipped).
std::vector<BoundRow> entropy_bound_study(std::span<const double> thetas, int n_max, double prior);
CsvTable bound_table(std::span<const BoundRow> rows);

/// Kendall rank correlation (tau-b) of paired samples.
double kendall_tau(std::span<const double> x, std::span<const double> y);

}  // namespace pie

#endif  // PIE_EXPERIMENTS_HPP_
