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

#include "pie/episode.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "pie/random.hpp"

namespace pie
{

const char * to_string(PlannerKind k)
{
  return k == PlannerKind::gpie ? "gpie" : "rhpie";
}

PlannerKind planner_kind_from_string(const std::string & s)
{
  if (s == "gpie") {
    return PlannerKind::gpie;
  }
  if (s == "rhpie") {
    return PlannerKind::rhpie;
  }
  throw std::invalid_argument("unknown planner '" + s + "' (expected gpie|rhpie)");
}

const char * to_string(Outcome o)
{
  switch (o) {
    case Outcome::reached_lra:
      return "reached_lra";
    case Outcome::collision:
      return "collision";
    case Outcome::filter_inconsistent:
      return "filter_inconsistent";
    case Outcome::path_incomplete:
      return "path_incomplete";
  }
  return "path_incomplete";
}

PlanResult run_planner(
  PlannerKind kind, const Roadmap & roadmap, const BeliefState & belief, const InterestGrid & grid,
  const Scenario & scenario)
{
  return kind == PlannerKind::gpie ? plan_gpie(roadmap, belief, grid, scenario)
                                   : plan_rhpie(roadmap, belief, grid, scenario);
}

Roadmap stage_roadmap(const Roadmap & base, const Scenario & scenario, const Point2 & from)
{
  auto rm = insert_node(base, scenario, NodeRole::start, from);
  rm = insert_node(std::move(rm), scenario, NodeRole::goal);
  check_connected(rm);
  return rm;
}

namespace
{

enum class StepStatus
{
  ok,
  collision,
  inconsistent,
};

/// Ground truth, estimate and map state of one running episode.
class Simulation
{
public:
  Simulation(const Scenario & s, std::uint64_t seed, bool record_trace)
  : s_(s),
    motion_rng_(combine_seed(seed, 2)),
    landmark_rng_(combine_seed(seed, 3)),
    interest_rng_(combine_seed(seed, 4)),
    grid_(s.prior_grid()),
    q_(s.noise.covariance()),
    record_trace_(record_trace)
  {
    Rng map_rng(combine_seed(seed, 1));
    truth_map_.resize(static_cast<std::size_t>(grid_.size()));
    for (int c = 0; c < grid_.size(); ++c) {
      truth_map_[static_cast<std::size_t>(c)] = map_rng.bernoulli(grid_.prob(c)) ? 1 : 0;
    }
    belief_ = {s.robot.initial_pose, s.robot.initial_cov};
    Rng init_rng(combine_seed(seed, 5));
    const Matrix3 chol = s.robot.initial_cov.llt().matrixL();
    const Vector3 z{init_rng.normal(), init_rng.normal(), init_rng.normal()};
    truth_ = RobotState::from_vector(belief_.mean.vector() + chol * z);
    reference_heading_ = belief_.mean.psi;
  }

  const BeliefState & belief() const { return belief_; }
  const RobotState & truth() const { return truth_; }
  const InterestGrid & grid() const { return grid_; }
  std::vector<TraceRow> & trace() { return trace_; }
  double time() const { return t_; }

  bool in_collision() const
  {
    const Point2 p = truth_.position();
    if (!s_.bounds.contains(p, s_.robot.radius)) {
      return true;
    }
    for (const auto & obs : s_.obstacles) {
      if (distance_to_polygon(obs, p) < s_.robot.radius || contains(obs, p)) {
        return true;
      }
    }
    return false;
  }

  /// Turns in place towards `heading`, then follows the edge to `to`.
  StepStatus traverse(const Point2 & from, const Point2 & to)
  {
    const EdgeModel model = s_.edge_model();
    const Point2 d = to - from;
    const double heading = std::atan2(d.y(), d.x());
    const double delta = wrap_angle(heading - reference_heading_);
    const int turn_steps = static_cast<int>(std::ceil(std::abs(delta) / (kTurnRate * model.dt) - 1e-9));
    for (int k = 1; k <= turn_steps; ++k) {
      const double psi = reference_heading_ + delta * k / turn_steps;
      const auto st = step({from.x(), from.y(), wrap_angle(psi)}, {0.0, delta / (turn_steps * model.dt)});
      if (st != StepStatus::ok) {
        return st;
      }
    }
    reference_heading_ = heading;
    const auto poses = edge_reference(from, to, model);
    const double v_ref = poses.empty() ? 0.0 : d.norm() / (static_cast<double>(poses.size()) * model.dt);
    for (const auto & pose : poses) {
      const auto st = step(pose, {v_ref, 0.0});
      if (st != StepStatus::ok) {
        return st;
      }
    }
    return StepStatus::ok;
  }

  /// Drives the estimate onto `at` (turning towards it when off by more than the
  /// arrival tolerance) for `duration` seconds.
  StepStatus hold(const Point2 & at, double duration)
  {
    const int n = static_cast<int>(std::ceil(duration / s_.episode.dt - 1e-9));
    for (int k = 0; k < n; ++k) {
      const auto st = step(hold_reference(at), {});
      if (st != StepStatus::ok) {
        return st;
      }
    }
    return StepStatus::ok;
  }

  /// Holds position and keeps filtering until the covariance trace drops below gamma.
  StepStatus dwell(const Point2 & at)
  {
    double waited = 0.0;
    while (belief_.cov.trace() >= s_.lra.gamma && waited < s_.episode.dwell_cap) {
      const auto st = step(hold_reference(at), {});
      if (st != StepStatus::ok) {
        return st;
      }
      waited += s_.episode.dt;
    }
    return StepStatus::ok;
  }

private:
  RobotState hold_reference(const Point2 & at) const
  {
    const Point2 d = at - belief_.mean.position();
    const double heading = d.norm() > kArrivalTolerance ? std::atan2(d.y(), d.x()) : reference_heading_;
    return {at.x(), at.y(), heading};
  }

  StepStatus step(const RobotState & reference, const Control & feedforward)
  {
    const double dt = s_.episode.dt;
    const Control u = track(belief_.mean, reference, s_.robot.gains, feedforward);
    const Control noise{motion_rng_.normal(0.0, s_.noise.v_std), motion_rng_.normal(0.0, s_.noise.omega_std)};
    truth_ = propagate(truth_, u.v, u.omega, dt, noise);
    belief_ = ekf_predict(belief_, u.v, u.omega, dt, q_);
    for (const auto & lm : s_.landmarks) {
      if (!lm.sees(truth_.position())) {
        continue;
      }
      auto z = predict_measurement(truth_, lm.position);
      z.range += landmark_rng_.normal(0.0, lm.range_noise_std);
      z.bearing = wrap_angle(z.bearing + landmark_rng_.normal(0.0, lm.bearing_noise_std));
      belief_ = ekf_update(belief_, lm, z);
    }

    int updated = 0;
    sense_clock_ += dt;
    const double period = 1.0 / s_.sensor.rate;
    while (sense_clock_ >= period - 1e-12) {
      sense_clock_ -= period;
      visible_cells(truth_.position(), truth_.psi, grid_, s_.sensor, s_.obstacles, cells_);
      for (const int c : cells_) {
        const bool interesting = truth_map_[static_cast<std::size_t>(c)] != 0;
        const double p_one = interesting ? s_.sensor.theta : 1.0 - s_.sensor.phi;
        const bool z = interest_rng_.bernoulli(p_one);
        grid_.set_prob(c, posterior_update(grid_.prob(c), z, s_.sensor));
      }
      updated += static_cast<int>(cells_.size());
    }
    t_ += dt;

    if (record_trace_) {
      trace_.push_back({t_, truth_, belief_.mean, belief_.cov.trace(), updated});
    }
    if (in_collision()) {
      return StepStatus::collision;
    }
    Vector3 e = truth_.vector() - belief_.mean.vector();
    e.z() = wrap_angle(e.z());
    const double nees = e.dot(belief_.cov.ldlt().solve(e));
    consecutive_ = nees > kNeesGate ? consecutive_ + 1 : 0;
    if (consecutive_ >= s_.episode.nees_window) {
      return StepStatus::inconsistent;
    }
    return StepStatus::ok;
  }

  const Scenario & s_;
  Rng motion_rng_;
  Rng landmark_rng_;
  Rng interest_rng_;
  InterestGrid grid_;
  std::vector<char> truth_map_;
  Matrix2 q_;
  bool record_trace_;
  BeliefState belief_;
  RobotState truth_;
  double reference_heading_ = 0.0;
  double t_ = 0.0;
  double sense_clock_ = 0.0;
  int consecutive_ = 0;
  std::vector<int> cells_;
  std::vector<TraceRow> trace_;
};

Outcome failure(StepStatus st)
{
  return st == StepStatus::collision ? Outcome::collision : Outcome::filter_inconsistent;
}

}  // namespace

EpisodeRecord run_episode(
  const Scenario & scenario, const EpisodeOptions & options, std::uint64_t seed, const Roadmap * base)
{
  Roadmap sampled;
  if (base == nullptr) {
    sampled = sample_roadmap(
      scenario, scenario.prm.nodes, scenario.prm.d_min, scenario.prm.d_max, scenario.prm.seed);
    base = &sampled;
  }
  const double prior_entropy = scenario.prior_grid().total_entropy();
  Simulation sim(scenario, seed, options.record_trace);
  EpisodeRecord rec;

  auto finish = [&](Outcome o) {
    rec.outcome = o;
    rec.posterior = sim.grid();
    rec.entropy_reduction = prior_entropy - rec.posterior.total_entropy();
    rec.trace = std::move(sim.trace());
    return rec;
  };

  if (sim.in_collision()) {
    return finish(Outcome::collision);
  }
  const int stages = options.stages.value_or(scenario.episode.stages);
  for (int stage = 0; stage < stages; ++stage) {
    StageRecord sr;
    sr.start_belief = sim.belief();
    Roadmap rm;
    try {
      rm = stage_roadmap(*base, scenario, sim.belief().mean.position());
    } catch (const std::exception & e) {
      sr.note = e.what();
      sr.end_time = sim.time();
      rec.stages.push_back(std::move(sr));
      return finish(Outcome::path_incomplete);
    }
    sr.plan = run_planner(options.planner, rm, sim.belief(), sim.grid(), scenario);
    sr.planned = sr.plan.found();
    if (!sr.planned) {
      sr.note = sr.plan.diagnostic;
      sr.end_time = sim.time();
      rec.stages.push_back(std::move(sr));
      return finish(Outcome::path_incomplete);
    }

    const auto & path = sr.plan.best_path;
    auto status = StepStatus::ok;
    for (std::size_t i = 1; i < path.size() && status == StepStatus::ok; ++i) {
      status = sim.traverse(
        rm.vertices[static_cast<std::size_t>(path[i - 1])], rm.vertices[static_cast<std::size_t>(path[i])]);
    }
    const Point2 end = rm.vertices[static_cast<std::size_t>(path.back())];
    if (status == StepStatus::ok) {
      status = sim.hold(end, scenario.episode.settle_time);
    }
    sr.end_time = sim.time();
    if (status != StepStatus::ok) {
      rec.stages.push_back(std::move(sr));
      return finish(failure(status));
    }
    sr.reached = point_in_region(sim.truth().position(), scenario.lra);
    rec.stages.push_back(sr);
    if (!sr.reached) {
      return finish(Outcome::path_incomplete);
    }
    status = sim.dwell(end);
    if (status != StepStatus::ok) {
      return finish(failure(status));
    }
  }
  return finish(Outcome::reached_lra);
}

}  // namespace pie
