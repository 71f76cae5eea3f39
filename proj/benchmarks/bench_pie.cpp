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


#include <benchmark/benchmark.h>

#include <string>

#include "pie/gpie.hpp"
#include "pie/interest_map.hpp"
#include "pie/rhpie.hpp"
#include "pie/roadmap.hpp"
#include "pie/scenario_io.hpp"
#include "pie/vehicle.hpp"

namespace
{

using namespace pie;

Scenario bundled(const std::string & name)
{
  return load_scenario(std::string(PIE_SCENARIO_DIR) + "/" + name + ".json");
}

void BM_ExpectedEntropy(benchmark::State & state)
{
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(expected_entropy(0.5, n, 0.75, 0.75));
  }
}
BENCHMARK(BM_ExpectedEntropy)->Arg(10)->Arg(100)->Arg(1000);

void BM_EdgeAggregates(benchmark::State & state)
{
  const auto s = bundled("three_obstacles");
  const auto model = s.edge_model();
  const Point2 from{0.5, 0.5};
  const Point2 to{2.0, 1.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(edge_aggregates(from, to, s.landmarks, model));
  }
}
BENCHMARK(BM_EdgeAggregates);

void BM_BuildPrm(benchmark::State & state)
{
  const auto s = bundled("open_3p5x9p5");
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_prm(s));
  }
}
BENCHMARK(BM_BuildPrm)->Unit(benchmark::kMillisecond);

void BM_Gpie(benchmark::State & state)
{
  const auto s = bundled("tiny_k6");
  const auto rm = build_prm(s);
  const auto grid = s.prior_grid();
  const BeliefState init{s.robot.initial_pose, s.robot.initial_cov};
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan_gpie(rm, init, grid, s));
  }
}
BENCHMARK(BM_Gpie)->Unit(benchmark::kMillisecond);

void BM_Rhpie(benchmark::State & state)
{
  auto s = bundled("open_3p5x9p5");
  s.planner.horizon = static_cast<int>(state.range(0));
  const auto rm = build_prm(s);
  const auto grid = s.prior_grid();
  const BeliefState init{s.robot.initial_pose, s.robot.initial_cov};
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan_rhpie(rm, init, grid, s));
  }
}
BENCHMARK(BM_Rhpie)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
