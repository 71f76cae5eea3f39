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

#include "pie/roadmap.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "pie/random.hpp"

namespace pie
{

int Roadmap::edge_between(int u, int v) const
{
  const auto & adj = adjacency.at(static_cast<std::size_t>(u));
  const auto it = std::lower_bound(
    adj.begin(), adj.end(), v, [](const std::pair<int, int> & e, int key) { return e.first < key; });
  return it != adj.end() && it->first == v ? it->second : -1;
}

int Roadmap::directed_index(int u, int v) const
{
  const int e = edge_between(u, v);
  if (e < 0) {
    throw std::out_of_range(
      "no edge between vertices " + std::to_string(u) + " and " + std::to_string(v));
  }
  return 2 * e + (edges[static_cast<std::size_t>(e)].a == u ? 0 : 1);
}

const DirectedEdgeData & Roadmap::directed(int u, int v) const
{
  const int d = directed_index(u, v);
  const auto & e = edges[static_cast<std::size_t>(d / 2)];
  return d % 2 == 0 ? e.forward : e.backward;
}

std::size_t Roadmap::max_degree() const
{
  std::size_t k = 0;
  for (const auto & adj : adjacency) {
    k = std::max(k, adj.size());
  }
  return k;
}

namespace
{

struct EdgeContext
{
  const Scenario & scenario;
  InterestGrid grid;
  EdgeModel model;
};

DirectedEdgeData annotate(const EdgeContext & ctx, const Point2 & from, const Point2 & to)
{
  DirectedEdgeData d;
  d.aggregates = edge_aggregates(from, to, ctx.scenario.landmarks, ctx.model);
  const Point2 pts[2] = {from, to};
  d.visibility = visibility_profile(
    std::span<const Point2>(pts, 2), ctx.grid, ctx.scenario.sensor, ctx.model.speed,
    ctx.scenario.obstacles);
  return d;
}

void add_edge(Roadmap & rm, const EdgeContext & ctx, int u, int v)
{
  RoadmapEdge e;
  e.a = u;
  e.b = v;
  const Point2 & pu = rm.vertices[static_cast<std::size_t>(u)];
  const Point2 & pv = rm.vertices[static_cast<std::size_t>(v)];
  e.length = (pv - pu).norm();
  e.forward = annotate(ctx, pu, pv);
  e.backward = annotate(ctx, pv, pu);
  const int idx = static_cast<int>(rm.edges.size());
  rm.edges.push_back(std::move(e));
  auto insert_sorted = [](std::vector<std::pair<int, int>> & adj, int n, int edge) {
    adj.insert(
      std::lower_bound(adj.begin(), adj.end(), std::make_pair(n, edge)), std::make_pair(n, edge));
  };
  insert_sorted(rm.adjacency[static_cast<std::size_t>(u)], v, idx);
  insert_sorted(rm.adjacency[static_cast<std::size_t>(v)], u, idx);
}

bool connectable(const Roadmap & rm, const Scenario & s, int u, int v)
{
  const Point2 & a = rm.vertices[static_cast<std::size_t>(u)];
  const Point2 & b = rm.vertices[static_cast<std::size_t>(v)];
  const double d = (b - a).norm();
  return d >= rm.d_min && d <= rm.d_max && segment_is_clear(s.obstacles, a, b, s.prm.clearance);
}

bool free_point(const Scenario & s, const Point2 & p)
{
  return s.bounds.contains(p, s.prm.clearance) && point_is_clear(s.obstacles, p, s.prm.clearance);
}

std::vector<int> components(const Roadmap & rm)
{
  std::vector<int> label(rm.vertices.size(), -1);
  int next = 0;
  for (std::size_t root = 0; root < rm.vertices.size(); ++root) {
    if (label[root] >= 0) {
      continue;
    }
    std::vector<int> stack{static_cast<int>(root)};
    label[root] = next;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const auto & [v, e] : rm.adjacency[static_cast<std::size_t>(u)]) {
        if (label[static_cast<std::size_t>(v)] < 0) {
          label[static_cast<std::size_t>(v)] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace

Roadmap sample_roadmap(
  const Scenario & scenario, int n_nodes, double d_min, double d_max, std::uint64_t seed)
{
  if (!(d_min < d_max) || d_min < 0.0) {
    throw std::invalid_argument("roadmap requires 0 <= d_min < d_max");
  }
  Roadmap rm;
  rm.d_min = d_min;
  rm.d_max = d_max;
  if (!scenario.prm.vertices.empty()) {
    for (const auto & p : scenario.prm.vertices) {
      if (!free_point(scenario, p)) {
        throw std::invalid_argument("explicit roadmap vertex lies outside free space");
      }
      rm.vertices.push_back(p);
    }
  } else {
    if (n_nodes < 2) {
      throw std::invalid_argument("roadmap requires at least 2 nodes");
    }
    Rng rng(mix_seed(seed));
    const long max_attempts = 1000L * n_nodes;
    long attempts = 0;
    while (static_cast<int>(rm.vertices.size()) < n_nodes) {
      if (++attempts > max_attempts) {
        throw std::runtime_error("free space too small to sample roadmap vertices");
      }
      const Point2 p{
        rng.uniform(scenario.bounds.min.x(), scenario.bounds.max.x()),
        rng.uniform(scenario.bounds.min.y(), scenario.bounds.max.y())};
      if (free_point(scenario, p)) {
        rm.vertices.push_back(p);
      }
    }
  }
  rm.adjacency.resize(rm.vertices.size());
  const EdgeContext ctx{scenario, scenario.prior_grid(), scenario.edge_model()};
  for (int u = 0; u < rm.vertex_count(); ++u) {
    for (int v = u + 1; v < rm.vertex_count(); ++v) {
      if (connectable(rm, scenario, u, v)) {
        add_edge(rm, ctx, u, v);
      }
    }
  }
  return rm;
}

Roadmap insert_node(Roadmap rm, const Scenario & scenario, NodeRole role, std::optional<Point2> point)
{
  Point2 p;
  if (point) {
    p = *point;
  } else if (role == NodeRole::goal) {
    const Point2 from = rm.start_id >= 0 ? rm.vertices[static_cast<std::size_t>(rm.start_id)]
                                         : scenario.robot.initial_pose.position();
    p = goal_point(scenario, from);
  } else {
    p = scenario.robot.initial_pose.position();
  }
  const char * name = role == NodeRole::start ? "start" : "goal";
  if (!scenario.bounds.contains(p) || !point_is_clear(scenario.obstacles, p, 0.0)) {
    throw std::invalid_argument(std::string(name) + " node lies outside free space");
  }
  const int id = rm.vertex_count();
  rm.vertices.push_back(p);
  rm.adjacency.emplace_back();
  const EdgeContext ctx{scenario, scenario.prior_grid(), scenario.edge_model()};
  bool connected = false;
  for (int v = 0; v < id; ++v) {
    if (connectable(rm, scenario, v, id)) {
      add_edge(rm, ctx, v, id);
      connected = true;
    }
  }
  if (!connected) {
    std::ostringstream msg;
    msg << name << " node at (" << p.x() << ", " << p.y() << ") has no feasible connection";
    throw std::runtime_error(msg.str());
  }
  (role == NodeRole::start ? rm.start_id : rm.goal_id) = id;
  return rm;
}

void check_connected(const Roadmap & rm)
{
  const auto label = components(rm);
  if (label[static_cast<std::size_t>(rm.start_id)] == label[static_cast<std::size_t>(rm.goal_id)]) {
    return;
  }
  const int n = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<int> sizes(static_cast<std::size_t>(n), 0);
  for (const int l : label) {
    ++sizes[static_cast<std::size_t>(l)];
  }
  std::ostringstream msg;
  msg << "disconnected roadmap: start component has "
      << sizes[static_cast<std::size_t>(label[static_cast<std::size_t>(rm.start_id)])]
      << " vertices, goal component has "
      << sizes[static_cast<std::size_t>(label[static_cast<std::size_t>(rm.goal_id)])]
      << " vertices, " << n << " components in total";
  throw DisconnectedRoadmap(msg.str(), std::move(sizes));
}

Roadmap build_prm(const Scenario & scenario, int n_nodes, double d_min, double d_max, std::uint64_t seed)
{
  auto rm = sample_roadmap(scenario, n_nodes, d_min, d_max, seed);
  rm = insert_node(std::move(rm), scenario, NodeRole::start);
  rm = insert_node(std::move(rm), scenario, NodeRole::goal);
  check_connected(rm);
  return rm;
}

Roadmap build_prm(const Scenario & scenario)
{
  return build_prm(scenario, scenario.prm.nodes, scenario.prm.d_min, scenario.prm.d_max, scenario.prm.seed);
}

EnumerationStats enumerate_simple_paths(
  const Roadmap & rm, int from, int to, const EnumerationOptions & options, const PathVisitor & visit)
{
  const int n = rm.vertex_count();
  if (from < 0 || from >= n || to < 0 || to >= n) {
    throw std::out_of_range("path endpoints are not roadmap vertices");
  }
  EnumerationStats stats;
  // neighbor order: nearest to the goal first, ties by id
  const Point2 & goal = rm.vertices[static_cast<std::size_t>(to)];
  std::vector<std::vector<int>> order(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    auto & o = order[static_cast<std::size_t>(u)];
    for (const auto & [v, e] : rm.adjacency[static_cast<std::size_t>(u)]) {
      o.push_back(v);
    }
    std::stable_sort(o.begin(), o.end(), [&](int a, int b) {
      return (rm.vertices[static_cast<std::size_t>(a)] - goal).squaredNorm() <
             (rm.vertices[static_cast<std::size_t>(b)] - goal).squaredNorm();
    });
  }

  std::vector<char> on_path(static_cast<std::size_t>(n), 0);
  std::vector<int> path{from};
  std::vector<std::size_t> cursor{0};
  on_path[static_cast<std::size_t>(from)] = 1;
  if (from == to) {
    stats.paths = 1;
    visit(path);
    return stats;
  }
  long steps = 0;
  while (!path.empty()) {
    if (options.deadline && (++steps & 255) == 0 &&
        std::chrono::steady_clock::now() >= *options.deadline) {
      stats.exhaustive = false;
      return stats;
    }
    const int u = path.back();
    auto & next = cursor.back();
    const auto & nbrs = order[static_cast<std::size_t>(u)];
    if (next >= nbrs.size() ||
        (options.max_nodes > 0 && static_cast<int>(path.size()) >= options.max_nodes)) {
      on_path[static_cast<std::size_t>(u)] = 0;
      path.pop_back();
      cursor.pop_back();
      continue;
    }
    const int v = nbrs[next++];
    if (on_path[static_cast<std::size_t>(v)]) {
      continue;
    }
    if (v == to) {
      path.push_back(v);
      ++stats.paths;
      const bool go_on = visit(path);
      path.pop_back();
      if (!go_on) {
        stats.exhaustive = false;
        return stats;
      }
      if (options.max_paths > 0 && stats.paths >= options.max_paths) {
        // exhaustive only if nothing else remains, which we cannot know cheaply
        stats.exhaustive = false;
        return stats;
      }
      continue;
    }
    path.push_back(v);
    cursor.push_back(0);
    on_path[static_cast<std::size_t>(v)] = 1;
  }
  return stats;
}

EnumerationStats local_paths(
  const Roadmap & rm, int from, int horizon, int goal, const PathVisitor & visit)
{
  if (horizon < 1) {
    throw std::invalid_argument("horizon must be at least 1");
  }
  EnumerationStats stats;
  std::vector<char> on_path(static_cast<std::size_t>(rm.vertex_count()), 0);
  std::vector<int> path{from};
  on_path[static_cast<std::size_t>(from)] = 1;
  bool stop = false;
  auto recurse = [&](auto & self) -> void {
    const int u = path.back();
    const int edges = static_cast<int>(path.size()) - 1;
    bool extended = false;
    if (edges < horizon && u != goal) {
      for (const auto & [v, e] : rm.adjacency[static_cast<std::size_t>(u)]) {
        if (stop) {
          return;
        }
        if (on_path[static_cast<std::size_t>(v)]) {
          continue;
        }
        extended = true;
        path.push_back(v);
        on_path[static_cast<std::size_t>(v)] = 1;
        self(self);
        on_path[static_cast<std::size_t>(v)] = 0;
        path.pop_back();
      }
    }
    if (!extended && edges > 0 && !stop) {
      ++stats.paths;
      if (!visit(path)) {
        stop = true;
        stats.exhaustive = false;
      }
    }
  };
  recurse(recurse);
  return stats;
}

bool point_in_region(const Point2 & p, const LocalizationRegion & region)
{
  return std::any_of(region.polygons.begin(), region.polygons.end(), [&](const Polygon & poly) {
    return contains(poly, p);
  });
}

}  // namespace pie
