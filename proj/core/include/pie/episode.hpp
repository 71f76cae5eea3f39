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

#ifndef PIE_EPISODE_HPP_
#define PIE_EPISODE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pie/gpie.hpp"
#include "pie/interest_map.hpp"
#include "pie/rhpie.hpp"
#include "pie/roadmap.hpp"
#include "pie/scenario.hpp"
#include "pie/vehicle.hpp"

namespace pie
{

enum class PlannerKind
{
  gpie,
  rhpie,
};

const char * to_string(PlannerKind k);
PlannerKind planner_kind_from_string(const std::string & s);

/// Runs the selected planner on a roadmap that already holds start and goal.
PlanResult run_planner(
  PlannerKind kind, const Roadmap & roadmap, const BeliefState & belief, const InterestGrid & grid,
  const Scenario & scenario);

/// Roadmap with start at `from` and goal at the LRA centroid nearest to it.
Roadmap stage_roadmap(const Roadmap & base, const Scenario & scenario, const Point2 & from);

enum class Outcome
{
  reached_lra,
  collision,
  filter_inconsistent,
  path_incomplete,
};

const char * to_string(Outcome o);

/// chi-square(3) 0.999 quantile
inline constexpr double kNeesGate = 16.27;
/// reference heading rate while turning in place (rad/s)
inline constexpr double kTurnRate = 1.0;
/// distance below which a held reference keeps its heading (m)
inline constexpr double kArrivalTolerance = 0.05;

struct StageRecord
{
  BeliefState start_belief;
  bool planned = false;
  PlanResult plan;
  /// ground truth inside the LRA when the path ended
  bool reached = false;
  double end_time = 0.0;
  std::string note;
};

struct TraceRow
{
  double t = 0.0;
  RobotState truth;
  RobotState estimate;
  double cov_trace = 0.0;
  int cells_updated = 0;
};

struct EpisodeRecord
{
  std::vector<StageRecord> stages;
  std::vector<TraceRow> trace;
  InterestGrid posterior;
  Outcome outcome = Outcome::path_incomplete;
  /// prior minus posterior total map entropy (nats)
  double entropy_reduction = 0.0;
};

struct EpisodeOptions
{
  PlannerKind planner = PlannerKind::rhpie;
  /// overrides scenario.episode.stages
  std::optional<int> stages;
  bool record_trace = true;
};

/// Closed-loop plan, execute and replan cycle with noisy motion, landmark and interest sensing.
/// When `base` is given it must be sample_roadmap(scenario) (start and goal are inserted per stage).
EpisodeRecord run_episode(
  const Scenario & scenario, const EpisodeOptions & options, std::uint64_t seed,
  const Roadmap * base = nullptr);

}  // namespace pie

#endif  // PIE_EPISODE_HPP_
