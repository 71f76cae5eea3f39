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

#include "pie/rhpie.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace pie
{

namespace
{

double largest_eigenvalue(const Matrix3 & m)
{
  const Matrix3 sym = 0.5 * (m + m.transpose());
  return Eigen::SelfAdjointEigenSolver<Matrix3>(sym, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

double smallest_eigenvalue(const Matrix3 & m)
{
  const Matrix3 sym = 0.5 * (m + m.transpose());
  return Eigen::SelfAdjointEigenSolver<Matrix3>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace

double b_pos_edge(const EdgeAggregates & edge, double sigma_worst, double sigma_best)
{
  Eigen::FullPivLU<Matrix3> lu(edge.G);
  if (!lu.isInvertible()) {
    throw std::domain_error("edge transition matrix G is singular");
  }
  const double prior_branch = sigma_worst * largest_eigenvalue(edge.G * edge.G.transpose());
  // lambda_max(G M^-1 G^T) = 1 / lambda_min(G^-T M G^-1)
  const Matrix3 g_inv = lu.inverse();
  const double info_min = smallest_eigenvalue(g_inv.transpose() * edge.Minfo * g_inv);
  const double scale = std::max(1.0, largest_eigenvalue(edge.Minfo));
  const double info_branch =
    info_min > 1e-12 * scale ? 1.0 / info_min : std::numeric_limits<double>::infinity();
  const double b = largest_eigenvalue(edge.L) + std::min(prior_branch, info_branch) - sigma_best;
  return std::max(b, kMinPosePenalty);
}

const std::vector<double> & TailWeights::b_info(InfoVariant v) const
{
  switch (v) {
    case InfoVariant::over:
      return b_info_over;
    case InfoVariant::under:
      return b_info_under;
    case InfoVariant::ave:
      break;
  }
  return b_info_ave;
}

std::vector<int> voronoi_assignment(const Roadmap & roadmap, const InterestGrid & grid)
{
  std::vector<int> owner(static_cast<std::size_t>(grid.size()), -1);
  for (int c = 0; c < grid.size(); ++c) {
    const Point2 p = grid.center(c);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < roadmap.edges.size(); ++e) {
      const auto & edge = roadmap.edges[e];
      const double d = point_segment_distance(
        p, roadmap.vertices[static_cast<std::size_t>(edge.a)],
        roadmap.vertices[static_cast<std::size_t>(edge.b)]);
      if (d < best) {
        best = d;
        owner[static_cast<std::size_t>(c)] = static_cast<int>(e);
      }
    }
  }
  return owner;
}

TailWeights compute_tail_weights(
  const Roadmap & roadmap, const InterestGrid & grid, const SensorModel & sensor, double n_cert,
  double sigma_worst, double sigma_best)
{
  const std::size_t n_edges = roadmap.edges.size();
  TailWeights w;
  w.b_pos.resize(2 * n_edges);
  w.b_info_over.assign(2 * n_edges, 0.0);
  w.b_info_under.assign(2 * n_edges, 0.0);
  w.b_info_ave.assign(2 * n_edges, 0.0);

  // k_j: undirected edges that see cell j in either direction
  std::vector<int> k(static_cast<std::size_t>(grid.size()), 0);
  for (const auto & edge : roadmap.edges) {
    std::vector<char> seen(static_cast<std::size_t>(grid.size()), 0);
    for (const auto * vis : {&edge.forward.visibility, &edge.backward.visibility}) {
      for (const auto & [cell, count] : vis->counts) {
        if (count > 0.0) {
          seen[static_cast<std::size_t>(cell)] = 1;
        }
      }
    }
    for (std::size_t c = 0; c < seen.size(); ++c) {
      k[c] += seen[c];
    }
  }
  const auto owner = voronoi_assignment(roadmap, grid);

  for (std::size_t e = 0; e < n_edges; ++e) {
    const auto & edge = roadmap.edges[e];
    for (int dir = 0; dir < 2; ++dir) {
      const auto & data = dir == 0 ? edge.forward : edge.backward;
      const std::size_t d = 2 * e + static_cast<std::size_t>(dir);
      w.b_pos[d] = b_pos_edge(data.aggregates, sigma_worst, sigma_best);
      for (const auto & [cell, count] : data.visibility.counts) {
        const double gain = bounded_cell_gain(grid.prob(cell), count, sensor, n_cert);
        w.b_info_over[d] += gain;
        if (owner[static_cast<std::size_t>(cell)] == static_cast<int>(e)) {
          w.b_info_under[d] += gain;
        }
        const int kj = std::max(1, k[static_cast<std::size_t>(cell)]);
        w.b_info_ave[d] += gain / kj;
      }
    }
  }
  return w;
}

double beta_max(std::span<const double> b_pos, std::span<const double> b_info)
{
  double beta = 1.0;
  for (std::size_t i = 0; i < b_pos.size(); ++i) {
    if (b_info[i] > 0.0) {
      double b = b_pos[i] / (b_pos[i] + b_info[i]);
      // step down past rounding so the weight at b is never negative
      while (b > 0.0 && (1.0 - b) * b_pos[i] - b * b_info[i] < 0.0) {
        b = std::nextafter(b, 0.0);
      }
      beta = std::min(beta, b);
    }
  }
  return beta;
}

std::vector<double> edge_weights(
  std::span<const double> b_pos, std::span<const double> b_info, double beta)
{
  std::vector<double> w(b_pos.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = (1.0 - beta) * b_pos[i] - beta * b_info[i];
  }
  return w;
}

TailPath tail_path(
  const Roadmap & roadmap, std::span<const double> weights, int from, int goal,
  std::span<const char> blocked)
{
  const int n = roadmap.vertex_count();
  if (from < 0 || from >= n || goal < 0 || goal >= n) {
    throw std::out_of_range("tail endpoints are not roadmap vertices");
  }
  TailPath out;
  out.suboptimal = std::any_of(weights.begin(), weights.end(), [](double w) { return w < 0.0; });

  auto is_blocked = [&](int v) {
    return v != from && !blocked.empty() && blocked[static_cast<std::size_t>(v)];
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(n), inf);
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[static_cast<std::size_t>(from)] = 0.0;
  queue.emplace(0.0, from);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (done[static_cast<std::size_t>(u)]) {
      continue;
    }
    done[static_cast<std::size_t>(u)] = 1;
    if (u == goal) {
      break;
    }
    for (const auto & [v, e] : roadmap.adjacency[static_cast<std::size_t>(u)]) {
      if (done[static_cast<std::size_t>(v)] || is_blocked(v)) {
        continue;
      }
      const int di = 2 * e + (roadmap.edges[static_cast<std::size_t>(e)].a == u ? 0 : 1);
      const double nd = d + weights[static_cast<std::size_t>(di)];
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        parent[static_cast<std::size_t>(v)] = u;
        queue.emplace(nd, v);
      }
    }
  }
  if (!done[static_cast<std::size_t>(goal)]) {
    throw TailUnreachable(
      "goal " + std::to_string(goal) + " unreachable from vertex " + std::to_string(from));
  }
  for (int v = goal; v != -1; v = parent[static_cast<std::size_t>(v)]) {
    out.path.push_back(v);
  }
  std::reverse(out.path.begin(), out.path.end());
  double sum = 0.0;
  for (std::size_t i = 1; i < out.path.size(); ++i) {
    sum += weights[static_cast<std::size_t>(roadmap.directed_index(out.path[i - 1], out.path[i]))];
  }
  out.r_tail = -sum;
  return out;
}

PlanResult plan_rhpie(
  const Roadmap & roadmap, const BeliefState & initial, const InterestGrid & grid,
  const Scenario & scenario, TailBookkeeping bookkeeping)
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto & params = scenario.planner;
  const double n_cert = certainty_threshold(scenario.sensor, params.n_cert_tol);
  const auto tw = compute_tail_weights(
    roadmap, grid, scenario.sensor, n_cert, scenario.sigma_worst(), scenario.sigma_best());
  const auto & b_info = tw.b_info(params.variant);
  const auto weights = edge_weights(tw.b_pos, b_info, params.beta);

  PlanResult result;
  result.suboptimal_tail = std::any_of(weights.begin(), weights.end(), [](double w) { return w < 0.0; });
  const int start = roadmap.start_id;
  const int goal = roadmap.goal_id;

  std::vector<char> on_head(static_cast<std::size_t>(roadmap.vertex_count()), 0);
  std::vector<int> head{start};
  on_head[static_cast<std::size_t>(start)] = 1;
  long unreachable = 0;

  auto consider = [&]() {
    ++result.paths_evaluated;
    std::vector<int> full = head;
    double objective = 0.0;
    try {
      if (head.back() == goal) {
        objective = path_reward(roadmap, head, grid, scenario.sensor, n_cert);
      } else {
        const auto tail = tail_path(roadmap, weights, head.back(), goal, on_head);
        full.insert(full.end(), tail.path.begin() + 1, tail.path.end());
        objective = bookkeeping == TailBookkeeping::exact
                      ? path_reward(roadmap, full, grid, scenario.sensor, n_cert)
                      : path_reward(roadmap, head, grid, scenario.sensor, n_cert) + tail.r_tail;
      }
    } catch (const TailUnreachable &) {
      ++unreachable;
      return;
    }
    const auto pb = evaluate_path(roadmap, full, initial, scenario);
    result.max_lf_probability = std::max(result.max_lf_probability, pb.lf_probability);
    if (!is_lf(pb, params.alpha)) {
      return;
    }
    ++result.paths_feasible;
    if (!result.found() || better_candidate(objective, full, result.best_reward, result.best_path)) {
      result.best_path = std::move(full);
      result.best_reward = objective;
      result.lf_probability = pb.lf_probability;
    }
  };

  auto expand = [&](auto & self) -> void {
    const int u = head.back();
    for (const auto & [v, e] : roadmap.adjacency[static_cast<std::size_t>(u)]) {
      if (on_head[static_cast<std::size_t>(v)]) {
        continue;
      }
      head.push_back(v);
      on_head[static_cast<std::size_t>(v)] = 1;
      consider();
      if (v != goal && static_cast<int>(head.size()) - 1 < params.horizon) {
        self(self);
      }
      on_head[static_cast<std::size_t>(v)] = 0;
      head.pop_back();
    }
  };
  if (start == goal) {
    consider();
  } else {
    expand(expand);
  }

  if (result.found()) {
    result.expected_reduction = path_reward(roadmap, result.best_path, grid, scenario.sensor, n_cert);
  } else {
    std::ostringstream msg;
    msg << "no localizably feasible completion among " << result.paths_evaluated << " heads ("
        << unreachable << " without a tail); max lf_probability " << result.max_lf_probability;
    result.diagnostic = msg.str();
  }
  result.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace pie
