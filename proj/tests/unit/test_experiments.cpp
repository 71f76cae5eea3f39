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


#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "pie/experiments.hpp"
#include "test_support.hpp"

namespace pie
{
namespace
{

TEST(KendallTau, Extremes)
{
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(kendall_tau(x, std::vector<double>{2, 4, 6, 8, 10}), 1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(x, std::vector<double>{5, 4, 3, 2, 1}), -1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(x, std::vector<double>{1, 1, 1, 1, 1}), 0.0);
}

TEST(KendallTau, TiesUseTauB)
{
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{1, 1, 2, 2};
  // 4 concordant pairs, 0 discordant, 2 tied in y only
  EXPECT_NEAR(kendall_tau(x, y), 4.0 / std::sqrt(6.0 * 4.0), 1e-15);
}

TEST(Csv, TwelveSignificantDigits)
{
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(2.0), "2");
  CsvTable t({"a", "b", "c"});
  t.row().add(1).add(0.25).add("x");
  t.row().add(true).add(1e-20).add(std::string("y"));
  EXPECT_EQ(t.str(), "a,b,c\n1,0.25,x\n1,1e-20,y\n");
}

TEST(ParallelFor, EachIndexOnce)
{
  std::vector<std::atomic<int>> hits(500);
  parallel_for(500, [&](int i) { hits[i]++; }, 4);
  for (const auto & h : hits) {
    EXPECT_EQ(h.load(), 1);
  }
  EXPECT_THROW(parallel_for(10, [](int i) {
    if (i == 7) {
      throw std::runtime_error("boom");
    }
  }, 3), std::runtime_error);
}

TEST(BoundStudy, RowsAndRelations)
{
  const std::vector<double> thetas{0.55, 0.75};
  const auto rows = entropy_bound_study(thetas, 20, 0.5);
  // theta 0.55 has no phi = theta - 0.1 partner inside [0.5, 1]
  EXPECT_EQ(rows.size(), 5u * 21u);
  for (const auto & r : rows) {
    EXPECT_NEAR(r.expected_entropy, expected_entropy(0.5, r.n, r.theta, r.phi), 1e-15);
    EXPECT_DOUBLE_EQ(r.floor, entropy_floor());
    EXPECT_GE(r.phi, 0.5);
  }
  EXPECT_EQ(bound_table(rows).str(), bound_table(entropy_bound_study(thetas, 20, 0.5)).str());
}

TEST(Sweeps, DeterministicTables)
{
  const auto s = test::bundled("tiny_k6");
  const std::vector<double> betas{0.1, 0.5, 0.9};
  const auto a = sweep_table(sweep_beta(s, betas, 1, 3, 7), false).str();
  const auto b = sweep_table(sweep_beta(s, betas, 1, 3, 7), false).str();
  EXPECT_EQ(a, b);
  const std::vector<int> horizons{1, 2, 3};
  const auto h = sweep_horizon(s, horizons, 0.1, 2, 7);
  EXPECT_EQ(h.size(), 6u);
  EXPECT_EQ(sweep_table(h, false).str(), sweep_table(sweep_horizon(s, horizons, 0.1, 2, 7), false).str());
  EXPECT_EQ(sweep_table(h, true).header().back(), "plan_time_s");
}

TEST(Sweeps, SuboptimalFlagFollowsBetaMax)
{
  const auto s = test::bundled("tiny_k6");
  const std::vector<double> betas{1e-12, 0.1, 0.5, 0.9};
  for (const auto & r : sweep_beta(s, betas, 1, 2, 3)) {
    EXPECT_EQ(r.suboptimal_tail, r.beta > r.beta_max) << r.beta;
  }
}

TEST(Sweeps, InitialPosePerturbation)
{
  const auto s = test::bundled("tiny_k6");
  EXPECT_EQ(sweep_initial_pose(s, 0, 1), s.robot.initial_pose);
  const auto p = sweep_initial_pose(s, 1, 1);
  EXPECT_NE(p, s.robot.initial_pose);
  EXPECT_LT((p.position() - s.robot.initial_pose.position()).norm(), 0.3);
  EXPECT_EQ(p, sweep_initial_pose(s, 1, 1));
}

TEST(MonteCarlo, DeterministicAndWellFormed)
{
  const auto base = desk_base_scenario();
  const std::vector<double> alphas{0.5, 0.9};
  const auto rows = monte_carlo_achievement(base, PlannerKind::gpie, alphas, 4, 17);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto & r : rows) {
    EXPECT_EQ(r.runs, 4);
    EXPECT_LE(r.planned, r.runs);
    EXPECT_EQ(r.flagged, r.planned == 0);
    if (r.planned > 0) {
      EXPECT_GE(r.predicted, r.alpha);
      EXPECT_GE(r.realized, 0.0);
      EXPECT_LE(r.realized, 1.0);
    }
  }
  EXPECT_EQ(
    achievement_table(rows).str(),
    achievement_table(monte_carlo_achievement(base, PlannerKind::gpie, alphas, 4, 17)).str());
  EXPECT_THROW(monte_carlo_achievement(base, PlannerKind::gpie, alphas, 0, 1), std::invalid_argument);
}

TEST(DeskMaps, GeneratedMapsAreValid)
{
  const auto base = desk_base_scenario();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto m = generate_desk_map(base, seed, {});
    EXPECT_NO_THROW(validate(m.scenario));
    EXPECT_NO_THROW(check_connected(m.roadmap));
    EXPECT_FALSE(m.scenario.lra.polygons.empty());
    EXPECT_EQ(generate_desk_map(base, seed, {}).scenario, m.scenario);
  }
}

}  // namespace
}  // namespace pie
