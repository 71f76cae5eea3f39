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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pie/episode.hpp"
#include "pie/experiments.hpp"
#include "pie/map_generator.hpp"
#include "pie/scenario_io.hpp"

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct Options
{
  std::string scenario;
  std::string planner = "rhpie";
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<int> horizon;
  std::optional<std::string> variant;
  std::uint64_t seed = 1;
  std::string out;
  std::string trace;
  int runs = 1;
  bool timing = false;
  std::vector<double> alphas{0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> betas{0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<int> horizons{1, 2, 3};
  std::vector<double> thetas{0.55, 0.65, 0.75};
  int n_max = 500;
  double prior = 0.5;
};

pie::Scenario load(const Options & o)
{
  auto s = pie::load_scenario(o.scenario);
  if (o.alpha) {
    s.planner.alpha = *o.alpha;
  }
  if (o.beta) {
    s.planner.beta = *o.beta;
  }
  if (o.horizon) {
    s.planner.horizon = *o.horizon;
  }
  if (o.variant) {
    s.planner.variant = pie::info_variant_from_string(*o.variant);
  }
  pie::validate(s);
  return s;
}

void emit(const Options & o, const pie::CsvTable & table)
{
  if (o.out.empty() || o.out == "-") {
    table.write(std::cout);
    return;
  }
  std::ofstream f(o.out);
  if (!f) {
    throw std::runtime_error("cannot write " + o.out);
  }
  table.write(f);
}

std::string join(const std::vector<int> & path)
{
  std::ostringstream s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    s << (i ? " " : "") << path[i];
  }
  return s.str();
}

int cmd_plan(const Options & o)
{
  const auto s = load(o);
  const auto rm = pie::build_prm(s);
  const pie::BeliefState belief{s.robot.initial_pose, s.robot.initial_cov};
  const auto kind = pie::planner_kind_from_string(o.planner);
  const auto r = pie::run_planner(kind, rm, belief, s.prior_grid(), s);
  pie::CsvTable t({"planner", "found", "path", "objective", "expected_reduction", "lf_probability",
                   "paths_evaluated", "paths_feasible", "exhaustive", "suboptimal_tail"});
  t.row().add(pie::to_string(kind)).add(r.found()).add(join(r.best_path)).add(r.best_reward)
    .add(r.expected_reduction).add(r.lf_probability).add(r.paths_evaluated).add(r.paths_feasible)
    .add(r.exhaustive).add(r.suboptimal_tail);
  emit(o, t);
  if (!r.found()) {
    std::cerr << r.diagnostic << '\n';
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_episode(const Options & o)
{
  const auto s = load(o);
  pie::EpisodeOptions opts;
  opts.planner = pie::planner_kind_from_string(o.planner);
  opts.record_trace = !o.trace.empty();
  const auto rec = pie::run_episode(s, opts, o.seed);
  pie::CsvTable t({"stage", "planned", "path", "lf_probability", "expected_reduction", "reached",
                   "end_time", "outcome", "entropy_reduction"});
  for (std::size_t i = 0; i < rec.stages.size(); ++i) {
    const auto & st = rec.stages[i];
    t.row().add(static_cast<long>(i)).add(st.planned).add(join(st.plan.best_path))
      .add(st.plan.lf_probability).add(st.plan.expected_reduction).add(st.reached).add(st.end_time)
      .add(pie::to_string(rec.outcome)).add(rec.entropy_reduction);
  }
  emit(o, t);
  if (!o.trace.empty()) {
    pie::CsvTable tr({"t", "truth_x", "truth_y", "truth_psi", "est_x", "est_y", "est_psi",
                      "cov_trace", "cells_updated"});
    for (const auto & row : rec.trace) {
      tr.row().add(row.t).add(row.truth.x).add(row.truth.y).add(row.truth.psi).add(row.estimate.x)
        .add(row.estimate.y).add(row.estimate.psi).add(row.cov_trace).add(row.cells_updated);
    }
    std::ofstream f(o.trace);
    if (!f) {
      throw std::runtime_error("cannot write " + o.trace);
    }
    tr.write(f);
  }
  const bool planned_first = !rec.stages.empty() && rec.stages.front().planned;
  return planned_first ? kExitOk : kExitInfeasible;
}

int cmd_mc(const Options & o)
{
  const auto base = o.scenario.empty() ? pie::desk_base_scenario() : load(o);
  const auto rows = pie::monte_carlo_achievement(
    base, pie::planner_kind_from_string(o.planner), o.alphas, o.runs, o.seed);
  emit(o, pie::achievement_table(rows));
  return kExitOk;
}

int cmd_sweep_beta(const Options & o)
{
  const auto s = load(o);
  const auto rows = pie::sweep_beta(s, o.betas, o.horizon.value_or(1), o.runs, o.seed);
  emit(o, pie::sweep_table(rows, o.timing));
  return kExitOk;
}

int cmd_sweep_horizon(const Options & o)
{
  const auto s = load(o);
  const auto rows = pie::sweep_horizon(s, o.horizons, o.beta.value_or(0.1), o.runs, o.seed);
  emit(o, pie::sweep_table(rows, o.timing));
  return kExitOk;
}

int cmd_bound(const Options & o)
{
  emit(o, pie::bound_table(pie::entropy_bound_study(o.thetas, o.n_max, o.prior)));
  return kExitOk;
}

int cmd_validate(const Options & o)
{
  const auto s = load(o);
  std::cout << "ok: " << (s.name.empty() ? o.scenario : s.name) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Chance-constrained informative path planning"};
  app.require_subcommand(1);
  Options o;

  auto add_scenario = [&](CLI::App * sub, bool required) {
    auto * opt = sub->add_option("--scenario", o.scenario, "scenario JSON file");
    if (required) {
      opt->required();
    }
  };
  auto add_planner_overrides = [&](CLI::App * sub) {
    sub->add_option("--alpha", o.alpha, "feasibility confidence");
    sub->add_option("--beta", o.beta, "tail scalarization weight");
    sub->add_option("--horizon", o.horizon, "receding horizon length");
    sub->add_option("--variant", o.variant, "tail information variant")
      ->check(CLI::IsMember({"over", "under", "ave"}));
  };
  auto add_common = [&](CLI::App * sub) {
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--out", o.out, "CSV output file (stdout when omitted)");
  };
  const auto planners = CLI::IsMember({"gpie", "rhpie"});

  auto * plan = app.add_subcommand("plan", "plan one path from the scenario's initial belief");
  add_scenario(plan, true);
  plan->add_option("--planner", o.planner)->check(planners);
  add_planner_overrides(plan);
  add_common(plan);

  auto * episode = app.add_subcommand("episode", "run one closed-loop episode");
  add_scenario(episode, true);
  episode->add_option("--planner", o.planner)->check(planners);
  episode->add_option("--trace", o.trace, "per-step trace CSV");
  add_planner_overrides(episode);
  add_common(episode);

  auto * mc = app.add_subcommand("mc-achievement", "predicted versus realized achievement on random desk maps");
  add_scenario(mc, false);
  mc->add_option("--planner", o.planner)->check(planners);
  mc->add_option("--runs", o.runs)->check(CLI::PositiveNumber);
  mc->add_option("--alphas", o.alphas)->delimiter(',');
  add_planner_overrides(mc);
  add_common(mc);

  auto * sb = app.add_subcommand("sweep-beta", "expected reduction against beta");
  add_scenario(sb, true);
  sb->add_option("--betas", o.betas)->delimiter(',');
  sb->add_option("--runs", o.runs)->check(CLI::PositiveNumber);
  sb->add_flag("--timing", o.timing, "add wall-clock plan time column");
  add_planner_overrides(sb);
  add_common(sb);

  auto * sh = app.add_subcommand("sweep-horizon", "expected reduction against horizon");
  add_scenario(sh, true);
  sh->add_option("--horizons", o.horizons)->delimiter(',');
  sh->add_option("--runs", o.runs)->check(CLI::PositiveNumber);
  sh->add_flag("--timing", o.timing, "add wall-clock plan time column");
  add_planner_overrides(sh);
  add_common(sh);

  auto * bs = app.add_subcommand("bound-study", "expected entropy against the floor");
  bs->add_option("--thetas", o.thetas)->delimiter(',');
  bs->add_option("--n-max", o.n_max)->check(CLI::NonNegativeNumber);
  bs->add_option("--prior", o.prior)->check(CLI::Range(0.0, 1.0));
  add_common(bs);

  auto * vs = app.add_subcommand("validate-scenario", "check a scenario file");
  add_scenario(vs, true);
  add_planner_overrides(vs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (plan->parsed()) {
      return cmd_plan(o);
    }
    if (episode->parsed()) {
      return cmd_episode(o);
    }
    if (mc->parsed()) {
      if (mc->count("--runs") == 0) {
        o.runs = 200;
      }
      if (mc->count("--planner") == 0) {
        o.planner = "gpie";
      }
      return cmd_mc(o);
    }
    if (sb->parsed()) {
      return cmd_sweep_beta(o);
    }
    if (sh->parsed()) {
      return cmd_sweep_horizon(o);
    }
    if (bs->parsed()) {
      return cmd_bound(o);
    }
    if (vs->parsed()) {
      return cmd_validate(o);
    }
  } catch (const pie::ScenarioError & e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
