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

#ifndef PIE_ROADMAP_HPP_
#define PIE_ROADMAP_HPP_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pie/geometry.hpp"
#include "pie/interest_map.hpp"
#include "pie/scenario.hpp"
#include "pie/vehicle.hpp"

namespace pie
{

/// Cached per-direction data of a roadmap edge.
struct DirectedEdgeData
{
  EdgeAggregates aggregates;
  VisibilityProfile visibility;
};

struct RoadmapEdge
{
  int a = 0;
  int b = 0;
  double length = 0.0;
  DirectedEdgeData forward;   // a -> b
  DirectedEdgeData backward;  // b -> a
};

/// Probabilistic roadmap over free space with cached edge annotations.
struct Roadmap
{
  std::vector<Point2> vertices;
  std::vector<RoadmapEdge> edges;
  /// adjacency[v] = (neighbor, edge index), sorted by neighbor
  std::vector<std::vector<std::pair<int, int>>> adjacency;
  int start_id = -1;
  int goal_id = -1;
  double d_min = 0.0;
  double d_max = 0.0;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  /// Edge index joining u and v, or -1.
  int edge_between(int u, int v) const;
  /// Directed index 2*edge + (0 forward, 1 backward).
  int directed_index(int u, int v) const;
  const DirectedEdgeData & directed(int u, int v) const;
  std::size_t max_degree() const;
};

class DisconnectedRoadmap : public std::runtime_error
{
public:
  DisconnectedRoadmap(const std::string & what, std::vector<int> component_sizes)
  : std::runtime_error(what), component_sizes_(std::move(component_sizes))
  {
  }
  const std::vector<int> & component_sizes() const { return component_sizes_; }

private:
  std::vector<int> component_sizes_;
};

enum class NodeRole
{
  start,
  goal,
};

/// Roadmap vertices and edges only (no start/goal). Deterministic given the seed.
Roadmap sample_roadmap(const Scenario & scenario, int n_nodes, double d_min, double d_max, std::uint64_t seed);

/// Full roadmap: samples, inserts the start (robot initial pose) and goal (LRA centroid),
/// and checks that they are connected.
Roadmap build_prm(const Scenario & scenario, int n_nodes, double d_min, double d_max, std::uint64_t seed);
Roadmap build_prm(const Scenario & scenario);

/// Adds a vertex at `point` connected to every vertex within [d_min, d_max] by a clear segment.
/// A goal without an explicit point goes to the LRA centroid nearest the start.
Roadmap insert_node(
  Roadmap roadmap, const Scenario & scenario, NodeRole role, std::optional<Point2> point = std::nullopt);

/// Throws DisconnectedRoadmap when start and goal lie in different components.
void check_connected(const Roadmap & roadmap);

struct EnumerationOptions
{
  /// maximum vertices per path, 0 = unlimited
  int max_nodes = 0;
  /// maximum paths yielded, 0 = unlimited
  long max_paths = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct EnumerationStats
{
  long paths = 0;
  bool exhaustive = true;
};

/// Return false from the visitor to stop early.
using PathVisitor = std::function<bool(std::span<const int>)>;

/// Every simple path from `from` to `to` in DFS order, neighbors taken nearest-to-goal first.
EnumerationStats enumerate_simple_paths(
  const Roadmap & roadmap, int from, int to, const EnumerationOptions & options,
  const PathVisitor & visit);

/// Simple paths from `from` with exactly `horizon` edges; shorter when they reach `goal`
/// or a dead end first.
EnumerationStats local_paths(
  const Roadmap & roadmap, int from, int horizon, int goal, const PathVisitor & visit);

bool point_in_region(const Point2 & p, const LocalizationRegion & region);

}  // namespace pie

#endif  // PIE_ROADMAP_HPP_
