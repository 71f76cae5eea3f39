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
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "pie/roadmap.hpp"
#include "test_support.hpp"

namespace pie
{
namespace
{

using test::make_graph;

std::vector<std::vector<int>> collect(const Roadmap & rm, int from, int to, EnumerationOptions opts = {})
{
  std::vector<std::vector<int>> out;
  enumerate_simple_paths(rm, from, to, opts, [&](std::span<const int> p) {
    out.emplace_back(p.begin(), p.end());
    return true;
  });
  return out;
}

Roadmap k4()
{
  return make_graph(
    {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, 0, 2);
}

Scenario open_room()
{
  Scenario s = test::bundled("tiny_k6");
  s.prm.vertices.clear();
  return s;
}

TEST(EnumerateSimplePaths, Triangle)
{
  const auto rm = make_graph({{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}}, {{0, 1}, {1, 2}, {2, 0}});
  const auto paths = collect(rm, 0, 2);
  ASSERT_EQ(paths.size(), 2u);
  const std::set<std::vector<int>> got(paths.begin(), paths.end());
  EXPECT_TRUE(got.count({0, 2}));
  EXPECT_TRUE(got.count({0, 1, 2}));
}

TEST(EnumerateSimplePaths, FourCliqueOppositeCorners)
{
  EXPECT_EQ(collect(k4(), 0, 2).size(), 5u);
}

TEST(EnumerateSimplePaths, MaxNodesTwoKeepsDirectEdge)
{
  EnumerationOptions opts;
  opts.max_nodes = 2;
  const auto paths = collect(k4(), 0, 2, opts);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0], (std::vector<int>{0, 2}));
}

TEST(EnumerateSimplePaths, PathBudgetStopsEarly)
{
  EnumerationOptions opts;
  opts.max_paths = 3;
  long seen = 0;
  const auto stats = enumerate_simple_paths(k4(), 0, 2, opts, [&](std::span<const int>) {
    ++seen;
    return true;
  });
  EXPECT_EQ(seen, 3);
  EXPECT_FALSE(stats.exhaustive);
}

TEST(EnumerateSimplePaths, VisitorCanStop)
{
  long seen = 0;
  const auto stats = enumerate_simple_paths(k4(), 0, 2, {}, [&](std::span<const int>) { return ++seen < 2; });
  EXPECT_EQ(seen, 2);
  EXPECT_FALSE(stats.exhaustive);
}

TEST(EnumerateSimplePaths, NoPathGivesEmptyStream)
{
  const auto rm = make_graph({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}, {{0, 1}});
  const auto stats = enumerate_simple_paths(rm, 0, 2, {}, [](std::span<const int>) { return true; });
  EXPECT_EQ(stats.paths, 0);
  EXPECT_TRUE(stats.exhaustive);
}

TEST(EnumerateSimplePaths, MatchesRecursiveCountOnSmallGraphs)
{
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const auto rm = test::random_graph(rng, n, 0.55);
    std::set<std::vector<int>> oracle;
    test::brute_force_paths(rm, 0, n - 1, [&](const std::vector<int> & p) { oracle.insert(p); });
    const auto paths = collect(rm, 0, n - 1);
    const std::set<std::vector<int>> got(paths.begin(), paths.end());
    EXPECT_EQ(paths.size(), got.size()) << "duplicate paths, trial " << trial;
    EXPECT_EQ(got, oracle) << "trial " << trial;
    for (const auto & p : paths) {
      EXPECT_EQ(std::set<int>(p.begin(), p.end()).size(), p.size());
      for (std::size_t i = 1; i < p.size(); ++i) {
        EXPECT_GE(rm.edge_between(p[i - 1], p[i]), 0);
      }
    }
  }
}

TEST(LocalPaths, HorizonOneIsOnePathPerNeighbor)
{
  const auto rm = k4();
  long count = 0;
  local_paths(rm, 0, 1, 2, [&](std::span<const int> p) {
    EXPECT_EQ(p.size(), 2u);
    ++count;
    return true;
  });
  EXPECT_EQ(count, 3);
}

TEST(LocalPaths, ChainHasOneHead)
{
  const auto rm = make_graph({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  std::vector<std::vector<int>> heads;
  local_paths(rm, 0, 3, 4, [&](std::span<const int> p) {
    heads.emplace_back(p.begin(), p.end());
    return true;
  });
  ASSERT_EQ(heads.size(), 1u);
  EXPECT_EQ(heads[0], (std::vector<int>{0, 1, 2, 3}));
}

TEST(LocalPaths, StopsAtGoalAndDeadEnds)
{
  const auto rm = make_graph({{0, 0}, {1, 0}, {2, 0}, {1, 1}}, {{0, 1}, {1, 2}, {0, 3}});
  std::set<std::vector<int>> heads;
  local_paths(rm, 0, 3, 1, [&](std::span<const int> p) {
    heads.emplace(p.begin(), p.end());
    return true;
  });
  EXPECT_EQ(heads, (std::set<std::vector<int>>{{0, 1}, {0, 3}}));
}

TEST(LocalPaths, CountBoundedByDegreePower)
{
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rm = test::random_graph(rng, 8, 0.5);
    const double kappa = static_cast<double>(rm.max_degree());
    for (int t = 1; t <= 3; ++t) {
      const auto stats = local_paths(rm, 0, t, 7, [](std::span<const int>) { return true; });
      EXPECT_LE(static_cast<double>(stats.paths), std::pow(kappa, t));
    }
  }
  EXPECT_THROW(local_paths(k4(), 0, 0, 2, [](std::span<const int>) { return true; }), std::invalid_argument);
}

TEST(SampleRoadmap, TwoExplicitVerticesGiveOneEdge)
{
  Scenario s = open_room();
  s.prm.vertices = {{1.0, 1.0}, {1.7, 1.0}};
  const auto rm = sample_roadmap(s, 2, 0.5, 1.0, 1);
  ASSERT_EQ(rm.edges.size(), 1u);
  EXPECT_NEAR(rm.edges[0].length, 0.7, 1e-12);
}

TEST(SampleRoadmap, DeterministicGivenSeed)
{
  const Scenario s = test::bundled("three_obstacles");
  const auto a = sample_roadmap(s, 40, 0.5, 1.0, 9);
  const auto b = sample_roadmap(s, 40, 0.5, 1.0, 9);
  const auto c = sample_roadmap(s, 40, 0.5, 1.0, 10);
  ASSERT_EQ(a.vertices.size(), b.vertices.size());
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    EXPECT_EQ(a.vertices[i].x(), b.vertices[i].x());
    EXPECT_EQ(a.vertices[i].y(), b.vertices[i].y());
  }
  EXPECT_EQ(a.edges.size(), b.edges.size());
  EXPECT_NE(a.vertices[0].x(), c.vertices[0].x());
}

TEST(SampleRoadmap, RejectsBadDistances)
{
  EXPECT_THROW(sample_roadmap(open_room(), 10, 1.0, 0.5, 1), std::invalid_argument);
}

// Edges checked by sampling points along each segment against every obstacle.
TEST(BuildPrm, BundledEdgesAreClearAndInRange)
{
  for (const auto & name : test::map_scenarios()) {
    const auto s = test::bundled(name);
    const auto rm = build_prm(s);
    EXPECT_EQ(rm.vertex_count(), s.prm.nodes + 2) << name;
    for (const auto & e : rm.edges) {
      const Point2 a = rm.vertices[e.a];
      const Point2 b = rm.vertices[e.b];
      EXPECT_GE(e.length, s.prm.d_min - 1e-12);
      EXPECT_LE(e.length, s.prm.d_max + 1e-12);
      for (int k = 0; k <= 200; ++k) {
        const Point2 p = a + (b - a) * (k / 200.0);
        EXPECT_TRUE(s.bounds.contains(p));
        for (const auto & obs : s.obstacles) {
          ASSERT_FALSE(contains(obs, p)) << name << " edge " << e.a << "-" << e.b;
          EXPECT_GE(distance_to_polygon(obs, p), s.prm.clearance - 1e-9);
        }
      }
    }
  }
}

TEST(BuildPrm, OpenMapEightyNodes)
{
  const auto s = test::bundled("open_3p5x9p5");
  EXPECT_EQ(s.prm.nodes, 80);
  EXPECT_DOUBLE_EQ(s.prm.d_min, 0.5);
  EXPECT_DOUBLE_EQ(s.prm.d_max, 1.0);
  EXPECT_DOUBLE_EQ(s.bounds.width(), 3.5);
  EXPECT_DOUBLE_EQ(s.bounds.height(), 9.5);
  EXPECT_EQ(s.landmarks.size(), 6u);
  const auto rm = build_prm(s);
  EXPECT_GE(rm.start_id, 0);
  EXPECT_GE(rm.goal_id, 0);
  EXPECT_NO_THROW(check_connected(rm));
}

TEST(BuildPrm, DirectedIndexing)
{
  const auto rm = build_prm(test::bundled("tiny_k6"));
  for (int e = 0; e < static_cast<int>(rm.edges.size()); ++e) {
    const auto & edge = rm.edges[e];
    EXPECT_EQ(rm.edge_between(edge.a, edge.b), e);
    EXPECT_EQ(rm.directed_index(edge.a, edge.b), 2 * e);
    EXPECT_EQ(rm.directed_index(edge.b, edge.a), 2 * e + 1);
    EXPECT_EQ(&rm.directed(edge.b, edge.a), &edge.backward);
  }
}

TEST(InsertNode, GoalDefaultsToRegionCentroid)
{
  const Scenario s = test::bundled("tiny_k6");
  const auto rm = build_prm(s);
  EXPECT_TRUE(rm.vertices[rm.goal_id].isApprox(centroid(s.lra.polygons[0])));
  EXPECT_TRUE(rm.vertices[rm.start_id].isApprox(s.robot.initial_pose.position()));
}

TEST(InsertNode, AtExistingVertexJoinsSameNeighborhood)
{
  Scenario s = open_room();
  s.prm.vertices = {{1.0, 1.0}, {1.7, 1.0}, {1.0, 1.8}, {2.5, 1.0}};
  const auto rm = sample_roadmap(s, 4, 0.5, 1.0, 1);
  const auto with = insert_node(rm, s, NodeRole::start, rm.vertices[0]);
  std::set<int> original;
  for (const auto & [v, e] : rm.adjacency[0]) {
    original.insert(v);
  }
  std::set<int> inserted;
  for (const auto & [v, e] : with.adjacency[with.start_id]) {
    inserted.insert(v);
  }
  EXPECT_EQ(original, inserted);
}

TEST(InsertNode, InsideObstacleThrows)
{
  const Scenario s = test::bundled("one_obstacle");
  const auto rm = sample_roadmap(s, s.prm.nodes, s.prm.d_min, s.prm.d_max, s.prm.seed);
  const Point2 inside = centroid(s.obstacles[0]);
  EXPECT_THROW(insert_node(rm, s, NodeRole::goal, inside), std::invalid_argument);
}

TEST(InsertNode, IsolatedPointThrows)
{
  Scenario s = open_room();
  s.prm.vertices = {{1.0, 1.0}, {1.7, 1.0}};
  const auto rm = sample_roadmap(s, 2, 0.5, 1.0, 1);
  EXPECT_THROW(insert_node(rm, s, NodeRole::goal, Point2(2.9, 1.9)), std::runtime_error);
}

TEST(CheckConnected, ReportsComponentSizes)
{
  auto rm = make_graph({{0, 0}, {1, 0}, {3, 0}, {4, 0}, {5, 0}}, {{0, 1}, {2, 3}, {3, 4}}, 0, 4);
  try {
    check_connected(rm);
    FAIL() << "expected DisconnectedRoadmap";
  } catch (const DisconnectedRoadmap & e) {
    auto sizes = e.component_sizes();
    std::sort(sizes.begin(), sizes.end());
    EXPECT_EQ(sizes, (std::vector<int>{2, 3}));
  }
}

TEST(PointInRegion, Examples)
{
  LocalizationRegion r;
  r.polygons = {make_rectangle({0.0, 0.0}, {1.0, 1.0}), make_rectangle({3.0, 3.0}, {4.0, 4.0})};
  EXPECT_TRUE(point_in_region({3.5, 3.5}, r));
  EXPECT_TRUE(point_in_region({1.0, 1.0}, r));
  EXPECT_FALSE(point_in_region({12.0, 12.0}, r));
  EXPECT_FALSE(point_in_region({2.0, 2.0}, r));
}

}  // namespace
}  // namespace pie
