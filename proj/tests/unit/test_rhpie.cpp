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


#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "pie/gpie.hpp"
#include "pie/rhpie.hpp"
#include "test_support.hpp"

namespace pie
{
namespace
{

double lambda_max(const Matrix3 & m)
{
  return Eigen::SelfAdjointEigenSolver<Matrix3>(0.5 * (m + m.transpose())).eigenvalues().maxCoeff();
}

Matrix3 random_pd(Rng & rng, double floor)
{
  Matrix3 a;
  for (int i = 0; i < 9; ++i) {
    a(i / 3, i % 3) = rng.normal();
  }
  return a * a.transpose() + floor * Matrix3::Identity();
}

Matrix3 random_invertible(Rng & rng)
{
  for (;;) {
    Matrix3 g;
    for (int i = 0; i < 9; ++i) {
      g(i / 3, i % 3) = rng.normal();
    }
    if (std::abs(g.determinant()) > 1e-2) {
      return g;
    }
  }
}

// Random positive pose penalties and non-negative rewards on every directed edge.
TailWeights random_weights(Rng & rng, const Roadmap & rm)
{
  TailWeights w;
  const std::size_t n = 2 * rm.edges.size();
  for (std::size_t i = 0; i < n; ++i) {
    w.b_pos.push_back(rng.uniform(0.05, 2.0));
    w.b_info_over.push_back(rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.0, 3.0));
  }
  w.b_info_under = w.b_info_ave = w.b_info_over;
  return w;
}

double brute_force_min_weight(const Roadmap & rm, std::span<const double> w, int from, int to)
{
  double best = std::numeric_limits<double>::infinity();
  test::brute_force_paths(rm, from, to, [&](const std::vector<int> & p) {
    double s = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i) {
      s += w[rm.directed_index(p[i - 1], p[i])];
    }
    best = std::min(best, s);
  });
  return best;
}

TEST(BPos, ScalarIdentityCase)
{
  EdgeAggregates e;
  e.Minfo = Matrix3::Identity();
  EXPECT_NEAR(b_pos_edge(e, 1.0, 0.1), 0.9, 1e-12);
}

TEST(BPos, UnobservableEdgeUsesPriorBranch)
{
  EdgeAggregates e;
  e.L = Matrix3::Identity() * 0.01;
  EXPECT_NEAR(b_pos_edge(e, 1.0, 0.1), 0.91, 1e-12);
}

TEST(BPos, ClampedStrictlyPositive)
{
  EdgeAggregates e;
  e.Minfo = Matrix3::Identity() * 1e6;
  EXPECT_EQ(b_pos_edge(e, 1.0, 0.1), kMinPosePenalty);
}

TEST(BPos, SingularTransitionThrows)
{
  EdgeAggregates e;
  e.G(2, 2) = 0.0;
  EXPECT_THROW(b_pos_edge(e, 1.0, 0.1), std::domain_error);
}

TEST(BPos, BoundsLargestEigenvalueAfterUpdate)
{
  Rng rng(4242);
  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix3 sigma = random_pd(rng, 1e-3);
    const Matrix3 minfo = random_pd(rng, 1e-3);
    const Matrix3 g = random_invertible(rng);
    Matrix3 l = random_pd(rng, 0.0);
    l *= rng.uniform(0.0, 1.0);
    const Matrix3 updated = l + g * (sigma.inverse() + minfo).inverse() * g.transpose();
    const double bound =
      lambda_max(l) + std::min(lambda_max(g * sigma * g.transpose()), lambda_max(g * minfo.inverse() * g.transpose()));
    EXPECT_GE(bound - lambda_max(updated), -1e-10 * std::max(1.0, bound)) << trial;

    // isotropic surrogate of sigma through the edge penalty
    EdgeAggregates e{g, l, minfo};
    EXPECT_GE(b_pos_edge(e, lambda_max(sigma), 0.0) - lambda_max(updated), -1e-10 * std::max(1.0, bound));
  }
}

TEST(BPos, MoreInformationNeverRaisesPenalty)
{
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    EdgeAggregates e{random_invertible(rng), random_pd(rng, 0.0) * 0.01, random_pd(rng, 1e-3) * 0.1};
    double prev = b_pos_edge(e, 1.0, 0.01);
    for (const double f : {1.5, 2.0, 4.0, 10.0, 100.0}) {
      EdgeAggregates scaled = e;
      scaled.Minfo *= f;
      const double cur = b_pos_edge(scaled, 1.0, 0.01);
      EXPECT_LE(cur, prev + 1e-12);
      prev = cur;
    }
  }
}

TEST(BetaMax, Examples)
{
  const std::vector<double> b_pos{1.0, 2.0};
  EXPECT_EQ(beta_max(b_pos, std::vector<double>{0.0, 0.0}), 1.0);
  EXPECT_NEAR(beta_max(std::vector<double>{1.0}, std::vector<double>{4.0}), 0.2, 1e-15);
}

TEST(BetaMax, TightOnRandomWeights)
{
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> bp, bi;
    for (int i = 0; i < 20; ++i) {
      bp.push_back(rng.uniform(1e-3, 2.0));
      bi.push_back(rng.uniform(0.0, 5.0));
    }
    const double bm = beta_max(bp, bi);
    for (const double w : edge_weights(bp, bi, bm)) {
      EXPECT_GE(w, 0.0);
    }
    const auto over = edge_weights(bp, bi, bm + 1e-6);
    EXPECT_LT(*std::min_element(over.begin(), over.end()), 0.0);
  }
}

TEST(TailPath, SingleEdge)
{
  const auto rm = test::make_graph({{0.0, 0.0}, {1.0, 0.0}}, {{0, 1}}, 0, 1);
  const std::vector<double> w{0.3, 0.7};
  const auto t = tail_path(rm, w, 0, 1);
  EXPECT_EQ(t.path, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(t.r_tail, -0.3);
  EXPECT_FALSE(t.suboptimal);
}

TEST(TailPath, MatchesBruteForceBelowBetaMax)
{
  Rng rng(555);
  int checked = 0;
  while (checked < 50) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const auto rm = test::random_graph(rng, n, 0.5);
    bool reachable = false;
    test::brute_force_paths(rm, 0, n - 1, [&](const std::vector<int> &) { reachable = true; });
    if (!reachable) {
      continue;
    }
    const auto tw = random_weights(rng, rm);
    const double bm = beta_max(tw.b_pos, tw.b_info_over);
    for (const double beta : {0.0, 0.5 * bm, bm}) {
      const auto w = edge_weights(tw.b_pos, tw.b_info_over, beta);
      const auto t = tail_path(rm, w, 0, n - 1);
      EXPECT_FALSE(t.suboptimal);
      EXPECT_NEAR(-t.r_tail, brute_force_min_weight(rm, w, 0, n - 1), 1e-12) << "graph " << checked;
      EXPECT_EQ(std::set<int>(t.path.begin(), t.path.end()).size(), t.path.size());
    }
    ++checked;
  }
}

TEST(TailPath, BetaZeroMinimizesPosePenalty)
{
  Rng rng(12);
  const auto rm = test::random_graph(rng, 7, 0.7);
  const auto tw = random_weights(rng, rm);
  const auto w = edge_weights(tw.b_pos, tw.b_info_over, 0.0);
  EXPECT_EQ(w, tw.b_pos);
  EXPECT_NEAR(-tail_path(rm, w, 0, 6).r_tail, brute_force_min_weight(rm, tw.b_pos, 0, 6), 1e-12);
}

TEST(TailPath, NegativeWeightsAreFlagged)
{
  const auto rm = test::make_graph({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}, {{0, 1}, {1, 2}}, 0, 2);
  const std::vector<double> w{0.5, 0.5, -0.1, 0.2};
  EXPECT_TRUE(tail_path(rm, w, 0, 2).suboptimal);
}

TEST(TailPath, BlockedVerticesAndUnreachableGoal)
{
  const auto rm = test::make_graph({{0, 0}, {1, 0}, {2, 0}, {1, 1}}, {{0, 1}, {1, 2}, {0, 3}, {3, 2}}, 0, 2);
  const std::vector<double> w(8, 1.0);
  std::vector<char> blocked(4, 0);
  blocked[1] = 1;
  EXPECT_EQ(tail_path(rm, w, 0, 2, blocked).path, (std::vector<int>{0, 3, 2}));
  blocked[3] = 1;
  EXPECT_THROW(tail_path(rm, w, 0, 2, blocked), TailUnreachable);
}

TEST(TailWeights, EdgeSeeingNothingEarnsNothing)
{
  auto rm = test::make_graph({{0.5, 0.5}, {2.5, 0.5}, {2.5, 2.5}}, {{0, 1}, {1, 2}}, 0, 2);
  const InterestGrid grid({0.0, 0.0}, 1.0, 3, 3, 0.5);
  rm.edges[0].forward.visibility.counts = {{grid.cell_at({0.5, 0.5}), 20.0}};
  rm.edges[1].forward.visibility.counts = {{grid.cell_at({2.5, 2.5}), 20.0}};
  SensorModel s;
  const auto tw = compute_tail_weights(rm, grid, s, 8.0, 1.0, 0.01);
  for (const auto * v : {&tw.b_info_over, &tw.b_info_under, &tw.b_info_ave}) {
    EXPECT_EQ((*v)[1], 0.0);
    EXPECT_EQ((*v)[3], 0.0);
  }
  // each cell seen by exactly one edge, which also owns it
  for (const int d : {0, 2}) {
    EXPECT_GT(tw.b_info_over[d], 0.0);
    EXPECT_DOUBLE_EQ(tw.b_info_under[d], tw.b_info_over[d]);
    EXPECT_DOUBLE_EQ(tw.b_info_ave[d], tw.b_info_over[d]);
  }
  for (const double b : tw.b_pos) {
    EXPECT_GT(b, 0.0);
  }
}

TEST(TailWeights, SharedCellIsSplitInAverage)
{
  auto rm = test::make_graph({{0.5, 0.5}, {2.5, 0.5}, {2.5, 2.5}}, {{0, 1}, {1, 2}}, 0, 2);
  const InterestGrid grid({0.0, 0.0}, 1.0, 3, 3, 0.5);
  const int shared = grid.cell_at({1.5, 1.5});
  rm.edges[0].forward.visibility.counts = {{shared, 20.0}};
  rm.edges[1].backward.visibility.counts = {{shared, 20.0}};
  const auto tw = compute_tail_weights(rm, grid, SensorModel{}, 8.0, 1.0, 0.01);
  EXPECT_DOUBLE_EQ(tw.b_info_ave[0], 0.5 * tw.b_info_over[0]);
  EXPECT_DOUBLE_EQ(tw.b_info_under[0] + tw.b_info_under[3], tw.b_info_over[0]);
}

TEST(TailWeights, VoronoiTiesGoToLowerEdge)
{
  const auto rm = test::make_graph({{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}}, {{0, 1}, {0, 2}}, 0, 1);
  const InterestGrid grid({0.0, 0.0}, 1.0, 2, 2, 0.5);
  const auto owner = voronoi_assignment(rm, grid);
  EXPECT_EQ(owner[grid.cell_at({0.5, 0.5})], 0);
  EXPECT_EQ(owner[grid.cell_at({1.5, 0.5})], 0);
  EXPECT_EQ(owner[grid.cell_at({0.5, 1.5})], 1);
}

TEST(TailWeights, SandwichOnBundledMaps)
{
  for (const auto & name : test::map_scenarios()) {
    const auto s = test::bundled(name);
    const auto rm = build_prm(s);
    const double n_cert = certainty_threshold(s.sensor, s.planner.n_cert_tol);
    const auto tw = compute_tail_weights(rm, s.prior_grid(), s.sensor, n_cert, s.sigma_worst(), s.sigma_best());
    ASSERT_EQ(tw.size(), 2 * rm.edges.size());
    for (std::size_t d = 0; d < tw.size(); ++d) {
      EXPECT_LE(tw.b_info_under[d], tw.b_info_over[d] + 1e-12) << name << " " << d;
      EXPECT_LE(tw.b_info_ave[d], tw.b_info_over[d] + 1e-12) << name << " " << d;
      EXPECT_GE(tw.b_info_under[d], 0.0);
      EXPECT_GT(tw.b_pos[d], 0.0);
    }
  }
}

Scenario chain_scenario()
{
  Scenario s = test::bundled("tiny_k6");
  s.lra.polygons = {make_rectangle({3.8, -0.2}, {4.2, 0.2})};
  return s;
}

TEST(PlanRhpie, ChainGraphHasOneAnswer)
{
  const auto rm = test::make_graph({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}, 0, 4);
  const InterestGrid grid({0.0, 0.0}, 1.0, 5, 1, 0.5);
  const BeliefState init{{0.0, 0.0, 0.0}, Matrix3::Identity() * 1e-4};
  for (const int t1 : {1, 2, 4}) {
    for (const double beta : {0.1, 0.5, 0.9}) {
      Scenario s = chain_scenario();
      s.planner.horizon = t1;
      s.planner.beta = beta;
      const auto r = plan_rhpie(rm, init, grid, s);
      ASSERT_TRUE(r.found());
      EXPECT_EQ(r.best_path, (std::vector<int>{0, 1, 2, 3, 4}));
    }
  }
}

class TinyGraph : public ::testing::Test
{
protected:
  Scenario s_ = test::bundled("tiny_k6");
  Roadmap rm_ = build_prm(s_);
  InterestGrid grid_ = s_.prior_grid();
  BeliefState init_{s_.robot.initial_pose, s_.robot.initial_cov};
};

TEST_F(TinyGraph, FullHorizonExactBookkeepingMatchesExhaustive)
{
  for (const double alpha : {0.5, 0.8, 0.95}) {
    Scenario s = s_;
    s.planner.alpha = alpha;
    s.planner.horizon = rm_.vertex_count() - 1;
    const auto g = plan_gpie(rm_, init_, grid_, s);
    const auto r = plan_rhpie(rm_, init_, grid_, s, TailBookkeeping::exact);
    ASSERT_TRUE(g.found());
    ASSERT_TRUE(r.found());
    EXPECT_EQ(r.best_path, g.best_path) << alpha;
    EXPECT_NEAR(r.best_reward, g.best_reward, 1e-9);
  }
}

TEST_F(TinyGraph, ObjectiveNonDecreasingInHorizon)
{
  for (const double beta : {0.1, 0.5}) {
    double prev = -std::numeric_limits<double>::infinity();
    for (int t1 = 1; t1 <= rm_.vertex_count() - 1; ++t1) {
      Scenario s = s_;
      s.planner.beta = beta;
      s.planner.horizon = t1;
      const auto r = plan_rhpie(rm_, init_, grid_, s);
      ASSERT_TRUE(r.found());
      EXPECT_GE(r.best_reward, prev - 1e-12) << "beta " << beta << " horizon " << t1;
      EXPECT_GE(r.lf_probability, s.planner.alpha);
      EXPECT_NEAR(r.expected_reduction, path_reward(rm_, r.best_path, grid_, s.sensor,
        certainty_threshold(s.sensor, s.planner.n_cert_tol)), 1e-12);
      prev = r.best_reward;
    }
  }
}

TEST_F(TinyGraph, ReturnedPathsAreSimpleAndFeasible)
{
  for (const auto variant : {InfoVariant::over, InfoVariant::under, InfoVariant::ave}) {
    Scenario s = s_;
    s.planner.variant = variant;
    s.planner.horizon = 2;
    const auto r = plan_rhpie(rm_, init_, grid_, s);
    ASSERT_TRUE(r.found());
    EXPECT_EQ(r.best_path.front(), rm_.start_id);
    EXPECT_EQ(r.best_path.back(), rm_.goal_id);
    EXPECT_EQ(std::set<int>(r.best_path.begin(), r.best_path.end()).size(), r.best_path.size());
    EXPECT_GE(r.lf_probability, s.planner.alpha);
  }
}

TEST(PlanRhpie, ObjectiveNonDecreasingInHorizonOnBundledMap)
{
  const auto s0 = test::bundled("open_3p5x9p5");
  const auto rm = build_prm(s0);
  const BeliefState init{s0.robot.initial_pose, s0.robot.initial_cov};
  double prev = -std::numeric_limits<double>::infinity();
  for (int t1 = 1; t1 <= 3; ++t1) {
    Scenario s = s0;
    s.planner.horizon = t1;
    const auto r = plan_rhpie(rm, init, s.prior_grid(), s);
    ASSERT_TRUE(r.found());
    EXPECT_GE(r.best_reward, prev - 1e-12);
    prev = r.best_reward;
  }
}

}  // namespace
}  // namespace pie
