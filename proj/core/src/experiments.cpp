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

#include "pie/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "pie/random.hpp"

namespace pie
{

std::string format_number(double v)
{
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

CsvTable & CsvTable::add(double v)
{
  rows_.back().push_back(format_number(v));
  return *this;
}

CsvTable & CsvTable::add(long v)
{
  rows_.back().push_back(std::to_string(v));
  return *this;
}

CsvTable & CsvTable::add(std::string v)
{
  rows_.back().push_back(std::move(v));
  return *this;
}

void CsvTable::write(std::ostream & out) const
{
  auto line = [&](const std::vector<std::string> & cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "," : "") << cells[i];
    }
    out << '\n';
  };
  line(header_);
  for (const auto & r : rows_) {
    line(r);
  }
}

std::string CsvTable::str() const
{
  std::ostringstream out;
  write(out);
  return out.str();
}

void parallel_for(int n, const std::function<void(int)> & body, int threads)
{
  if (threads <= 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
        }
      }
    });
  }
  pool.clear();
  if (error) {
    std::rethrow_exception(error);
  }
}

std::vector<AchievementRow> monte_carlo_achievement(
  const Scenario & base, PlannerKind planner, std::span<const double> alphas, int runs,
  std::uint64_t seed, const DeskMapParams & params)
{
  if (runs < 1) {
    throw std::invalid_argument("monte carlo needs at least one run");
  }
  struct RunResult
  {
    bool planned = false;
    double lf = 0.0;
    bool reached = false;
    Outcome outcome = Outcome::path_incomplete;
  };
  const int n_alpha = static_cast<int>(alphas.size());
  std::vector<RunResult> results(static_cast<std::size_t>(n_alpha * runs));
  parallel_for(runs, [&](int r) {
    const std::uint64_t run_seed = combine_seed(seed, static_cast<std::uint64_t>(r));
    const auto map = generate_desk_map(base, run_seed, params);
    const auto sampled = sample_roadmap(
      map.scenario, map.scenario.prm.nodes, map.scenario.prm.d_min, map.scenario.prm.d_max,
      map.scenario.prm.seed);
    for (int a = 0; a < n_alpha; ++a) {
      Scenario s = map.scenario;
      s.planner.alpha = alphas[static_cast<std::size_t>(a)];
      EpisodeOptions opts;
      opts.planner = planner;
      opts.stages = 1;
      opts.record_trace = false;
      const auto rec = run_episode(s, opts, combine_seed(run_seed, 0x5eed), &sampled);
      auto & out = results[static_cast<std::size_t>(a * runs + r)];
      out.outcome = rec.outcome;
      if (!rec.stages.empty() && rec.stages.front().planned) {
        out.planned = true;
        out.lf = rec.stages.front().plan.lf_probability;
        out.reached = rec.stages.front().reached;
      }
    }
  });

  std::vector<AchievementRow> rows;
  for (int a = 0; a < n_alpha; ++a) {
    AchievementRow row;
    row.alpha = alphas[static_cast<std::size_t>(a)];
    row.runs = runs;
    double lf_sum = 0.0;
    int reached = 0;
    for (int r = 0; r < runs; ++r) {
      const auto & res = results[static_cast<std::size_t>(a * runs + r)];
      if (!res.planned) {
        continue;
      }
      ++row.planned;
      lf_sum += res.lf;
      reached += res.reached ? 1 : 0;
      row.collisions += res.outcome == Outcome::collision ? 1 : 0;
      row.inconsistent += res.outcome == Outcome::filter_inconsistent ? 1 : 0;
    }
    row.flagged = row.planned == 0;
    if (row.planned > 0) {
      row.predicted = lf_sum / row.planned;
      row.realized = static_cast<double>(reached) / row.planned;
    }
    rows.push_back(row);
  }
  return rows;
}

CsvTable achievement_table(std::span<const AchievementRow> rows)
{
  CsvTable t({"alpha", "runs", "planned", "predicted", "realized", "collisions", "inconsistent", "flagged"});
  for (const auto & r : rows) {
    t.row().add(r.alpha).add(r.runs).add(r.planned).add(r.predicted).add(r.realized)
      .add(r.collisions).add(r.inconsistent).add(r.flagged);
  }
  return t;
}

RobotState sweep_initial_pose(const Scenario & scenario, int run, std::uint64_t seed, int attempt)
{
  RobotState pose = scenario.robot.initial_pose;
  if (run == 0) {
    return pose;
  }
  Rng rng(combine_seed(combine_seed(seed, static_cast<std::uint64_t>(run)), static_cast<std::uint64_t>(attempt)));
  pose.x += rng.normal(0.0, 0.05);
  pose.y += rng.normal(0.0, 0.05);
  pose.psi = wrap_angle(pose.psi + rng.normal(0.0, std::numbers::pi / 180.0));
  return pose;
}

namespace
{

struct SweepRun
{
  Scenario scenario;
  Roadmap roadmap;
  BeliefState belief;
  InterestGrid grid;
};

constexpr int kMaxPoseAttempts = 50;

std::vector<SweepRun> sweep_runs(const Scenario & scenario, int runs, std::uint64_t seed)
{
  if (runs < 1) {
    throw std::invalid_argument("sweep needs at least one run");
  }
  const auto base = sample_roadmap(
    scenario, scenario.prm.nodes, scenario.prm.d_min, scenario.prm.d_max, scenario.prm.seed);
  std::vector<SweepRun> out;
  for (int r = 0; r < runs; ++r) {
    SweepRun run;
    run.scenario = scenario;
    for (int attempt = 0;; ++attempt) {
      run.scenario.robot.initial_pose = sweep_initial_pose(scenario, r, seed, attempt);
      run.belief = {run.scenario.robot.initial_pose, scenario.robot.initial_cov};
      try {
        run.roadmap = stage_roadmap(base, run.scenario, run.belief.mean.position());
        break;
      } catch (const std::exception &) {
        if (r == 0 || attempt + 1 == kMaxPoseAttempts) {
          throw;
        }
      }
    }
    run.grid = scenario.prior_grid();
    out.push_back(std::move(run));
  }
  return out;
}

SweepRow sweep_point(const SweepRun & run, double beta, int horizon, int index)
{
  Scenario s = run.scenario;
  s.planner.beta = beta;
  s.planner.horizon = horizon;
  const auto result = plan_rhpie(run.roadmap, run.belief, run.grid, s);
  const double n_cert = certainty_threshold(s.sensor, s.planner.n_cert_tol);
  const auto tw = compute_tail_weights(run.roadmap, run.grid, s.sensor, n_cert, s.sigma_worst(), s.sigma_best());
  SweepRow row;
  row.beta = beta;
  row.horizon = horizon;
  row.run = index;
  row.found = result.found();
  row.expected_reduction = result.expected_reduction;
  row.objective = result.best_reward;
  row.lf_probability = result.lf_probability;
  row.beta_max = beta_max(tw.b_pos, tw.b_info(s.planner.variant));
  row.suboptimal_tail = result.suboptimal_tail;
  row.heads = result.paths_evaluated;
  row.path_vertices = static_cast<int>(result.best_path.size());
  row.plan_time = result.elapsed;
  return row;
}

}  // namespace

std::vector<SweepRow> sweep_beta(
  const Scenario & scenario, std::span<const double> betas, int horizon, int runs, std::uint64_t seed)
{
  const auto prepared = sweep_runs(scenario, runs, seed);
  const int nb = static_cast<int>(betas.size());
  std::vector<SweepRow> rows(static_cast<std::size_t>(nb * runs));
  parallel_for(nb * runs, [&](int i) {
    const int b = i / runs;
    const int r = i % runs;
    rows[static_cast<std::size_t>(i)] =
      sweep_point(prepared[static_cast<std::size_t>(r)], betas[static_cast<std::size_t>(b)], horizon, r);
  });
  return rows;
}

std::vector<SweepRow> sweep_horizon(
  const Scenario & scenario, std::span<const int> horizons, double beta, int runs, std::uint64_t seed)
{
  const auto prepared = sweep_runs(scenario, runs, seed);
  const int nh = static_cast<int>(horizons.size());
  std::vector<SweepRow> rows(static_cast<std::size_t>(nh * runs));
  // sequential so that plan times are not distorted by sharing the cores
  for (int i = 0; i < nh * runs; ++i) {
    const int h = i / runs;
    const int r = i % runs;
    rows[static_cast<std::size_t>(i)] =
      sweep_point(prepared[static_cast<std::size_t>(r)], beta, horizons[static_cast<std::size_t>(h)], r);
  }
  return rows;
}

CsvTable sweep_table(std::span<const SweepRow> rows, bool include_timing)
{
  std::vector<std::string> header{
    "beta", "horizon", "run", "found", "expected_reduction", "objective", "lf_probability",
    "beta_max", "suboptimal_tail", "heads", "path_vertices"};
  if (include_timing) {
    header.emplace_back("plan_time_s");
  }
  CsvTable t(header);
  for (const auto & r : rows) {
    t.row().add(r.beta).add(r.horizon).add(r.run).add(r.found).add(r.expected_reduction)
      .add(r.objective).add(r.lf_probability).add(r.beta_max).add(r.suboptimal_tail)
      .add(r.heads).add(r.path_vertices);
    if (include_timing) {
      t.add(r.plan_time);
    }
  }
  return t;
}

std::vector<BoundRow> entropy_bound_study(std::span<const double> thetas, int n_max, double prior)
{
  std::vector<BoundRow> rows;
  const double floor = entropy_floor();
  const std::pair<const char *, double> relations[] = {
    {"theta_eq_phi", 0.0}, {"theta_eq_phi_plus_0.1", -0.1}, {"theta_eq_phi_minus_0.1", 0.1}};
  for (const double theta : thetas) {
    for (const auto & [name, offset] : relations) {
      const double phi = theta + offset;
      if (phi < 0.5 - 1e-12 || phi > 1.0 + 1e-12) {
        continue;
      }
      for (int n = 0; n <= n_max; ++n) {
        rows.push_back({name, theta, phi, n, expected_entropy(prior, n, theta, phi), floor});
      }
    }
  }
  return rows;
}

CsvTable bound_table(std::span<const BoundRow> rows)
{
  CsvTable t({"relation", "theta", "phi", "n", "expected_entropy", "floor"});
  for (const auto & r : rows) {
    t.row().add(r.relation).add(r.theta).add(r.phi).add(r.n).add(r.expected_entropy).add(r.floor);
  }
  return t;
}

double kendall_tau(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size()) {
    throw std::invalid_argument("kendall_tau needs paired samples");
  }
  long concordant = 0;
  long discordant = 0;
  long ties_x = 0;
  long ties_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) {
        continue;
      }
      if (dx == 0.0) {
        ++ties_x;
      } else if (dy == 0.0) {
        ++ties_y;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double n1 = static_cast<double>(concordant + discordant + ties_x);
  const double n2 = static_cast<double>(concordant + discordant + ties_y);
  if (n1 == 0.0 || n2 == 0.0) {
    return 0.0;
  }
  return static_cast<double>(concordant - discordant) / std::sqrt(n1 * n2);
}

}  // namespace pie
