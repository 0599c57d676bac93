// Copyright 2026 The netseg Authors.
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

#include "netseg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "netseg/errors.hpp"
#include "netseg/estimation.hpp"
#include "netseg/experiments.hpp"
#include "netseg/jr_model.hpp"
#include "netseg/rng.hpp"
#include "netseg/sbm.hpp"
#include "netseg/stats.hpp"

namespace netseg {
namespace {

std::size_t scaled(std::size_t base, double effort, std::size_t floor_value) {
  const double v = std::round(static_cast<double>(base) * effort);
  return std::max(floor_value, static_cast<std::size_t>(v));
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t r) {
  return Rng(seed, stream).split(r).key();
}

JrParams example_jr_params() {
  JrParams p;
  p.num_types = 2;
  p.n_s = 6.0;
  p.n_d = 2.0;
  p.n_f = 4.0;
  p.alpha = 0.75;
  return p;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"sbm-bounds", "jr-convergence", "jr-interventions",
                                              "fixed-node", "estimation-recovery"};
  return names;
}

SuiteReport run_suite(std::string_view name, const VerifyOptions& options) {
  if (name == "sbm-bounds") return verify_sbm_bounds(options);
  if (name == "jr-convergence") return verify_jr_convergence(options);
  if (name == "jr-interventions") return verify_jr_interventions(options);
  if (name == "fixed-node") return verify_fixed_node(options);
  if (name == "estimation-recovery") return verify_estimation_recovery(options);
  throw Error(ErrorCode::kInvalidArgument, "unknown suite '" + std::string(name) + "'");
}

// ----------------------------------------------------------------------------

SuiteReport verify_sbm_bounds(const VerifyOptions& options) {
  SuiteReport report;
  report.suite = "sbm-bounds";
  SbmSweepConfig config;
  config.groups = {300, 100};
  config.q = 0.02;
  config.ratios = {0.05, 0.125, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0};
  config.gammas = {1.0, 2.0, 3.0, 4.0};
  config.replicates = scaled(200, options.effort, 20);
  config.seed = options.seed;
  config.threads = options.threads;
  const auto points = sbm_relative_sweep(config);
  report.table = sbm_sweep_table(points);

  std::size_t decided = 0;
  std::size_t agree = 0;
  std::string disagreements;
  for (const auto& pt : points) {
    // Points on the band boundary, or whose 99% CI reaches zero, decide nothing.
    if (pt.predicted == EffectSign::kNeutral || pt.effect.contains(0.0, kZ99)) continue;
    ++decided;
    const auto observed = pt.effect.mean > 0.0 ? EffectSign::kPositive : EffectSign::kNegative;
    if (observed == pt.predicted) {
      ++agree;
    } else {
      disagreements += fmt("; disagrees at gamma=%g p/q=%g", pt.gamma, pt.ratio);
    }
  }
  report.checks.push_back({"relative effect sign matches (l, u) band", agree == decided && decided > 0,
                           std::to_string(agree) + "/" + std::to_string(decided) +
                               " decided grid points agree with the band" + disagreements});

  const auto balanced = relative_bounds(SbmParams{{200, 200}, 0.02, 0.01}, 1.0);
  report.checks.push_back({"balanced groups give l* = 1", balanced.l_star == 1.0,
                           fmt("l* = %.17g", balanced.l_star)});
  return report;
}

// ----------------------------------------------------------------------------

SuiteReport verify_jr_convergence(const VerifyOptions& options) {
  SuiteReport report;
  report.suite = "jr-convergence";
  constexpr std::uint64_t kHorizon = 10000;
  const std::size_t reps = scaled(20, options.effort, 4);

  JrTrajectoryConfig config;
  config.params = example_jr_params();
  config.t_max = kHorizon;
  config.replicates = reps;
  config.seed = options.seed;
  config.threads = options.threads;
  const auto points = jr_trajectory(config);
  report.table = jr_trajectory_table(points);

  const double f_inf = equilibrium_integration(config.params);
  std::vector<double> log_t;
  std::vector<double> log_gap;
  for (const auto& pt : points) {
    if (pt.t < 100 || pt.f.mean == f_inf) continue;
    log_t.push_back(std::log(static_cast<double>(pt.t)));
    log_gap.push_back(std::log(std::abs(pt.f.mean - f_inf)));
  }
  const auto fit = ols(log_t, log_gap);
  const double target = -derive(config.params).m_r;
  report.checks.push_back({"log-log slope of |f - f_inf| matches -(N_S+N_D)/N within 0.15",
                           std::abs(fit.slope - target) <= 0.15,
                           fmt("slope %.4f, target %.4f", fit.slope, target)});

  // Random parameter sets from both seed-graph kinds.
  Rng prng(options.seed, 0xc1);
  std::size_t ok = 0;
  std::size_t total = 0;
  double worst = 0.0;
  std::string failures;
  for (int set = 0; set < 10; ++set) {
    JrParams p;
    p.num_types = 2 + static_cast<std::uint32_t>(prng.below(2));
    p.type_dist.resize(p.num_types);
    double sum = 0.0;
    for (auto& x : p.type_dist) sum += (x = 0.2 + prng.uniform());
    for (auto& x : p.type_dist) x /= sum;
    p.n_s = 1.0 + 5.0 * prng.uniform();
    p.n_d = 1.0 + 3.0 * prng.uniform();
    p.n_f = (p.n_s + p.n_d) * prng.uniform();
    const double lo = 1.0 / p.num_types;
    p.alpha = lo + (1.0 - lo) * (0.02 + 0.96 * prng.uniform());
    const double theory = equilibrium_integration(p);
    for (SeedKind kind : {SeedKind::kSegregated, SeedKind::kComplete}) {
      JrTrajectoryConfig c;
      c.params = p;
      c.t_max = kHorizon;
      c.replicates = reps;
      c.seed_kind = kind;
      c.seed = Rng(options.seed, 0xc2).split(static_cast<std::uint64_t>(2 * set + (kind == SeedKind::kComplete))).key();
      c.threads = options.threads;
      const auto s = jr_trajectory(c, {kHorizon}).front().f;
      const double tol = std::max(0.02, 3.0 * s.half_width());
      const double err = std::abs(s.mean - theory);
      worst = std::max(worst, err);
      ++total;
      if (err <= tol) {
        ++ok;
      } else {
        failures += fmt("; set %g: sim %.4f vs %.4f", set, s.mean, theory);
      }
    }
  }
  report.checks.push_back({"simulated f(1e4) within max(0.02, 3 CI) of the closed form", ok == total,
                           std::to_string(ok) + "/" + std::to_string(total) +
                               fmt(" runs, worst error %.4f", worst) + failures});

  bool identical = true;
  for (int k = 0; k < 5; ++k) {
    JrParams p = config.params;
    p.type_dist = {0.1 + 0.8 * prng.uniform(), 0.0};
    p.type_dist[1] = 1.0 - p.type_dist[0];
    identical = identical && equilibrium_integration(p) == f_inf;
  }
  report.checks.push_back({"closed form independent of the type distribution", identical,
                           fmt("f_inf = %.12g", f_inf)});
  return report;
}

// ----------------------------------------------------------------------------

SuiteReport verify_jr_interventions(const VerifyOptions& options) {
  SuiteReport report;
  report.suite = "jr-interventions";
  InterventionConfig config;
  config.params = example_jr_params();
  config.plan.T = 2000;
  config.plan.I = 50;
  config.plan.delta_ns.assign(config.plan.I, -2.0);
  config.plan.rate_limit = 2.0;
  config.t_max = 10000;
  config.replicates = scaled(50, options.effort, 8);
  config.seed = options.seed;
  config.threads = options.threads;
  const auto points = intervention_experiment(config);
  report.table = intervention_table(points);

  const std::uint64_t t_end = config.plan.T + config.plan.I;
  for (const auto& pt : points) {
    if (pt.t != t_end && pt.t != config.t_max) continue;
    const double z = (pt.delta.mean - pt.theory) / pt.delta.sem;
    const bool immediate = pt.t == t_end;
    report.checks.push_back({immediate ? "paired delta f(T+I) matches the immediate effect within 3 sigma"
                                       : "paired delta f(1e4) matches the long-term effect within 3 sigma",
                             std::abs(z) <= 3.0,
                             fmt("sim %.6g +- %.2g, theory %.6g, z = %.2f", pt.delta.mean, pt.delta.sem, pt.theory, z)});
  }

  const auto& params = config.params;
  const double rate = 1e-4;
  const auto opt = optimal_interventions(params, config.plan.T, config.plan.I, rate);
  double max_dev = 0.0;
  for (std::uint64_t j = 1; j <= config.plan.I; ++j) {
    max_dev = std::max(max_dev, std::abs(opt.plan.delta_ns[j - 1] -
                                         optimal_intervention_closed_form(params, config.plan.T, rate, j)));
  }
  report.checks.push_back({"planner equals the closed form in the unclamped regime",
                           opt.closed_form_regime && !opt.clamped && max_dev <= 1e-9,
                           fmt("max deviation %.3g", max_dev)});
  const double max_step = *std::max_element(opt.step_change.begin(), opt.step_change.end());
  report.checks.push_back({"every predicted step change respects the rate limit", max_step <= rate * (1.0 + 1e-12),
                           fmt("max step %.12g, limit %.12g", max_step, rate)});
  const double gain_err = std::abs(opt.gain - static_cast<double>(config.plan.I) * rate);
  report.checks.push_back({"predicted gain equals I * Delta", gain_err <= 1e-9, fmt("|gain - I Delta| = %.3g", gain_err)});
  return report;
}

// ----------------------------------------------------------------------------

SuiteReport verify_fixed_node(const VerifyOptions& options) {
  SuiteReport report;
  report.suite = "fixed-node";
  FixedNodeGridConfig config;
  config.replicates = scaled(4, options.effort, 2);
  config.seed = options.seed;
  config.threads = options.threads;
  const auto points = fixed_node_grid(config);
  report.table = fixed_node_table(points);

  double worst = 0.0;
  double worst_c0 = 0.0;
  bool monotone = true;
  std::string mono_detail;
  // Points come s-major with c ascending.
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    worst = std::max(worst, std::abs(pt.sim.mean - pt.theory));
    if (pt.c == 0.0) worst_c0 = std::max(worst_c0, std::abs(pt.theory - (1.0 - pt.s)));
    if (i > 0 && points[i - 1].s == pt.s) {
      const double step = pt.theory - points[i - 1].theory;
      const bool ok = pt.s > 0.5 ? step >= -1e-9 : (pt.s < 0.5 ? step <= 1e-9 : true);
      if (!ok) {
        monotone = false;
        mono_detail += fmt(" s=%g c=%g", pt.s, pt.c);
      }
    }
  }
  report.checks.push_back({"|sim - theory| <= 0.03 over the grid", worst <= 0.03, fmt("max deviation %.4f", worst)});
  report.checks.push_back({"equilibrium integration monotone in c on each side of s = 1/2", monotone,
                           monotone ? "ok" : "violated at" + mono_detail});
  report.checks.push_back({"c = 0 equilibrium equals 1 - s within 0.02", worst_c0 <= 0.02,
                           fmt("max deviation %.3g", worst_c0)});
  return report;
}

// ----------------------------------------------------------------------------

SuiteReport verify_estimation_recovery(const VerifyOptions& options) {
  SuiteReport report;
  report.suite = "estimation-recovery";
  report.table.columns = {"replicate", "n_s_true", "n_d_true", "n_fs_true", "n_fd_true", "n_s_fit", "n_d_fit",
                          "n_fs_fit", "n_fd_fit", "observed_integration", "f_inf", "f_inf_no_tc", "tc_contribution"};

  const Theta truth{6.0, 2.0, 3.0, 1.0};
  const std::size_t datasets = scaled(3, options.effort, 1);
  double worst_rel = 0.0;
  double worst_f = 0.0;
  for (std::size_t r = 0; r < datasets; ++r) {
    const std::uint64_t seed = replicate_seed(options.seed, 0xe5, r);
    const auto data = generate_synthetic(truth, 2, 5000, seed);
    std::vector<NodeId> nodes(data.graph.node_count() - data.first_arrival);
    std::iota(nodes.begin(), nodes.end(), data.first_arrival);
    const auto evidence = collect_evidence(data.graph, nodes, seed);
    FitOptions fo;
    fo.seed = seed;
    const auto fit = fit_theta(evidence, fo);
    const auto pred = predict_equilibrium(fit.theta, 2);
    const auto t = truth.as_array();
    const auto f = fit.theta.as_array();
    for (int i = 0; i < 4; ++i) worst_rel = std::max(worst_rel, std::abs(f[i] - t[i]) / t[i]);
    worst_f = std::max(worst_f, std::abs(pred.f_inf - data.observed_integration));
    report.table.add_row({static_cast<std::int64_t>(r), t[0], t[1], t[2], t[3], f[0], f[1], f[2], f[3],
                          data.observed_integration, pred.f_inf, pred.f_inf_no_tc, pred.tc_contribution});
  }
  report.checks.push_back({"fitted theta within 15% of the generator componentwise", worst_rel <= 0.15,
                           fmt("worst relative error %.3f", worst_rel)});
  report.checks.push_back({"predicted f_inf within 0.03 of observed integration", worst_f <= 0.03,
                           fmt("worst gap %.4f", worst_f)});

  // Enumeration against a plain 2^|V| filter on random descendant graphs.
  Rng rng(options.seed, 0xe6);
  std::size_t mismatches = 0;
  const std::size_t graphs = scaled(200, options.effort, 20);
  for (std::size_t k = 0; k < graphs; ++k) {
    const auto n = static_cast<std::uint32_t>(1 + rng.below(12));
    std::vector<TypeId> types(n);
    for (auto& x : types) x = static_cast<TypeId>(rng.below(2));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
    const double density = rng.uniform() * 0.5;
    for (std::uint32_t a = 0; a < n; ++a) {
      for (std::uint32_t b = 0; b < n; ++b) {
        if (a != b && rng.bernoulli(density)) arcs.emplace_back(a, b);
      }
    }
    const auto gu = make_descendant_graph(0, types, arcs);
    auto found = enumerate_feasible_assignments(gu, 0).assignments;
    std::vector<PhaseAssignment> brute;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      PhaseAssignment phi(n);
      for (std::uint32_t i = 0; i < n; ++i) phi[i] = (mask >> i) & 1u ? 2 : 1;
      if (is_feasible(gu, phi)) brute.push_back(phi);
    }
    std::sort(found.begin(), found.end());
    std::sort(brute.begin(), brute.end());
    if (found != brute) ++mismatches;
  }
  report.checks.push_back({"feasible enumeration equals 2^|V(u)| brute force (|V(u)| <= 12)", mismatches == 0,
                           std::to_string(mismatches) + " mismatches over " + std::to_string(graphs) + " graphs"});

  // u -> v, w, x with v -> w and w -> x.
  const std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs{{0, 1}, {1, 2}};
  const auto example = make_descendant_graph(0, {0, 1, 1}, arcs);
  const auto count = enumerate_feasible_assignments(example, 0).assignments.size();
  report.checks.push_back({"four-node example has exactly 3 feasible assignments", count == 3,
                           std::to_string(count) + " assignments"});
  return report;
}

}  // namespace netseg
