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

#include "netseg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netseg/errors.hpp"
#include "netseg/fixed_node.hpp"
#include "netseg/graph_ops.hpp"
#include "netseg/parallel.hpp"
#include "netseg/rng.hpp"

namespace netseg {
namespace {

constexpr std::uint64_t kSbmStream = 0x5b00;
constexpr std::uint64_t kTrajectoryStream = 0x7a00;
constexpr std::uint64_t kInterventionStream = 0x1e00;
constexpr std::uint64_t kFixedNodeStream = 0xf000;

std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t r) {
  return Rng(seed, stream).split(r).key();
}

void require_replicates(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 replicates");
}

}  // namespace

std::vector<std::uint64_t> log_times(std::uint64_t t_max) {
  if (t_max < 1) throw Error(ErrorCode::kInvalidArgument, "t_max must be >= 1");
  std::vector<std::uint64_t> ts;
  for (int k = 0;; ++k) {
    const auto t = static_cast<std::uint64_t>(std::llround(std::pow(10.0, k / 20.0)));
    if (t > t_max) break;
    if (ts.empty() || ts.back() != t) ts.push_back(t);
  }
  if (ts.back() != t_max) ts.push_back(t_max);
  return ts;
}

// ---------------------------------------------------------------------------

std::vector<SbmSweepPoint> sbm_relative_sweep(const SbmSweepConfig& config) {
  require_replicates(config.replicates);
  if (config.groups.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two groups");
  for (double g : config.gammas) {
    if (!(g >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "gamma must be >= 1");
  }
  double n = 0.0;
  double mono_pairs = 0.0;
  for (auto k : config.groups) {
    n += k;
    mono_pairs += 0.5 * static_cast<double>(k) * (static_cast<double>(k) - 1.0);
  }
  const double bi_pairs = 0.5 * n * (n - 1.0) - mono_pairs;

  std::vector<SbmSweepPoint> out;
  for (std::size_t ri = 0; ri < config.ratios.size(); ++ri) {
    const SbmParams params{config.groups, config.ratios[ri] * config.q, config.q};
    params.validate();
    const auto per_rep = map_replicates(
        config.replicates,
        [&](std::size_t r) {
          const auto g = sample_sbm(params, replicate_seed(config.seed, kSbmStream + ri, r));
          const auto es = integration(g);
          const auto ws = count_wedges(g);
          const double e = static_cast<double>(es.mono_edges + es.bi_edges);
          const double w_bi = ws.total() > 0 ? static_cast<double>(ws.bi_wedges) / ws.total() : 0.0;
          const double o_m = mono_pairs - static_cast<double>(es.mono_edges);
          const double o_b = bi_pairs - static_cast<double>(es.bi_edges);
          std::vector<double> d;
          for (double gamma : config.gammas) d.push_back((w_bi - o_b / (o_b + gamma * o_m)) / (e + 1.0));
          return d;
        },
        config.threads);
    for (std::size_t gi = 0; gi < config.gammas.size(); ++gi) {
      std::vector<double> xs;
      xs.reserve(per_rep.size());
      for (const auto& d : per_rep) xs.push_back(d[gi]);
      SbmSweepPoint pt;
      pt.gamma = config.gammas[gi];
      pt.ratio = config.ratios[ri];
      pt.bounds = relative_bounds(params, pt.gamma);
      pt.predicted = relative_effect_sign(params, pt.gamma);
      pt.effect = summarize(xs);
      out.push_back(pt);
    }
  }
  return out;
}

Table sbm_sweep_table(const std::vector<SbmSweepPoint>& points) {
  Table t;
  t.columns = {"gamma", "p_over_q", "lower", "upper", "sim_effect_mean", "sim_effect_ci"};
  for (const auto& p : points) {
    t.add_row({p.gamma, p.ratio, p.bounds.lower, p.bounds.upper, p.effect.mean, p.effect.half_width(kZ99)});
  }
  return t;
}

// ---------------------------------------------------------------------------

std::vector<JrTrajectoryPoint> jr_trajectory(const JrTrajectoryConfig& config,
                                             std::vector<std::uint64_t> times) {
  require_replicates(config.replicates);
  config.params.validate(false);
  if (times.empty()) times = log_times(config.t_max);
  for (auto t : times) {
    if (t < 1 || t > config.t_max) throw Error(ErrorCode::kInvalidArgument, "report times must lie in [1, t_max]");
  }
  const auto runs = map_replicates(
      config.replicates,
      [&](std::size_t r) {
        const std::uint64_t s = replicate_seed(config.seed, kTrajectoryStream, r);
        return simulate_jr(config.params, config.t_max, s, jr_seed_graph(config.params, config.seed_kind, s))
            .integration;
      },
      config.threads);
  std::vector<JrTrajectoryPoint> out;
  for (auto t : times) {
    std::vector<double> xs;
    xs.reserve(runs.size());
    for (const auto& run : runs) xs.push_back(run[t - 1]);
    out.push_back({t, summarize(xs), integration_at_exact(config.params, t)});
  }
  return out;
}

Table jr_trajectory_table(const std::vector<JrTrajectoryPoint>& points) {
  Table t;
  t.columns = {"t", "f_sim_mean", "f_sim_ci", "f_theory"};
  for (const auto& p : points) {
    t.add_row({static_cast<std::int64_t>(p.t), p.f.mean, p.f.half_width(), p.theory});
  }
  return t;
}

// ---------------------------------------------------------------------------

std::vector<InterventionPoint> intervention_experiment(const InterventionConfig& config) {
  require_replicates(config.replicates);
  config.plan.validate(config.params);
  const std::uint64_t t_end = config.plan.T + config.plan.I;
  if (config.t_max < t_end) throw Error(ErrorCode::kInvalidArgument, "t_max must be >= T + I");
  const auto runs = map_replicates(
      config.replicates,
      [&](std::size_t r) {
        return simulate_with_interventions(config.params, config.plan, config.t_max,
                                           replicate_seed(config.seed, kInterventionStream, r));
      },
      config.threads);
  const auto immediate = intervention_immediate_effect(config.params, config.plan);

  std::vector<std::uint64_t> times;
  if (config.plan.T >= 1) times.push_back(config.plan.T);
  times.push_back(t_end);
  for (auto t : log_times(config.t_max)) {
    if (t > t_end) times.push_back(t);
  }
  std::vector<InterventionPoint> out;
  for (auto t : times) {
    std::vector<double> base, treat, diff;
    for (const auto& run : runs) {
      base.push_back(run.baseline[t - 1]);
      treat.push_back(run.treated[t - 1]);
      diff.push_back(run.treated[t - 1] - run.baseline[t - 1]);
    }
    InterventionPoint pt;
    pt.t = t;
    pt.baseline = summarize(base);
    pt.treated = summarize(treat);
    pt.delta = summarize(diff);
    if (t == t_end) {
      pt.theory = immediate.total;
    } else if (t > t_end) {
      pt.theory = intervention_longterm_effect(config.params, config.plan, t).total;
    }
    out.push_back(pt);
  }
  return out;
}

Table intervention_table(const std::vector<InterventionPoint>& points) {
  Table t;
  t.columns = {"t", "f_baseline_mean", "f_treated_mean", "delta_sim_mean", "delta_sim_ci", "delta_theory"};
  for (const auto& p : points) {
    t.add_row({static_cast<std::int64_t>(p.t), p.baseline.mean, p.treated.mean, p.delta.mean, p.delta.half_width(),
               p.theory});
  }
  return t;
}

// ---------------------------------------------------------------------------

std::vector<FixedNodePoint> fixed_node_grid(const FixedNodeGridConfig& config) {
  require_replicates(config.replicates);
  if (config.nodes < 4) throw Error(ErrorCode::kInvalidArgument, "need at least 4 nodes");
  const std::uint32_t n1 = config.nodes / 2;
  const std::uint32_t n2 = config.nodes - n1;
  const auto edges = static_cast<std::uint64_t>(std::llround(config.mean_degree * config.nodes / 2.0));
  const double pairs = 0.5 * config.nodes * (config.nodes - 1.0);
  if (edges < 1 || static_cast<double>(edges) > pairs) {
    throw Error(ErrorCode::kInvalidArgument, "mean degree gives no edges or more than a complete graph");
  }
  if (config.time_units < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 time units");
  // Expected edge mix of the uniform random starting graph.
  const double p11 = 0.5 * n1 * (n1 - 1.0) / pairs;
  const double p22 = 0.5 * n2 * (n2 - 1.0) / pairs;

  std::vector<FixedNodePoint> out;
  for (std::size_t si = 0; si < config.s_values.size(); ++si) {
    for (std::size_t ci = 0; ci < config.c_values.size(); ++ci) {
      FixedNodeParams params;
      params.s = config.s_values[si];
      params.c = config.c_values[ci];
      params.s_prime = config.s_prime;
      params.n_theta = {static_cast<double>(n1) / config.nodes, static_cast<double>(n2) / config.nodes};
      params.validate();
      const std::uint64_t stream = kFixedNodeStream + si * config.c_values.size() + ci;
      const auto sims = map_replicates(
          config.replicates,
          [&](std::size_t r) {
            const std::uint64_t seed = replicate_seed(config.seed, stream, r);
            auto g = random_typed_graph({n1, n2}, edges, seed);
            const auto run = simulate_fixed_node(std::move(g), params, edges * config.time_units, seed);
            const std::size_t half = run.integration.size() / 2;
            return std::accumulate(run.integration.begin() + static_cast<std::ptrdiff_t>(half),
                                   run.integration.end(), 0.0) /
                   static_cast<double>(run.integration.size() - half);
          },
          config.threads);
      FixedNodePoint pt;
      pt.s = params.s;
      pt.c = params.c;
      pt.theory = equilibrium_from(params, p11, p22).integration;
      pt.sim = summarize(sims);
      out.push_back(pt);
    }
  }
  return out;
}

Table fixed_node_table(const std::vector<FixedNodePoint>& points) {
  Table t;
  t.columns = {"s", "c", "integration_theory", "integration_sim_mean", "integration_sim_ci"};
  for (const auto& p : points) t.add_row({p.s, p.c, p.theory, p.sim.mean, p.sim.half_width()});
  return t;
}

}  // namespace netseg
