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

#ifndef NETSEG_EXPERIMENTS_HPP_
#define NETSEG_EXPERIMENTS_HPP_

#include <cstdint>
#include <vector>

#include "netseg/jr_model.hpp"
#include "netseg/sbm.hpp"
#include "netseg/stats.hpp"
#include "netseg/table.hpp"

namespace netseg {

// Replicated simulation drivers shared by the command-line tool and the
// verification suites. Replicate r always uses seed stream r, so results do
// not depend on the number of threads.

// Log-spaced integer times in [1, t_max], 20 per decade, always ending at t_max.
std::vector<std::uint64_t> log_times(std::uint64_t t_max);

// ---------------------------------------------------------------------------
// SBM: wedge closure against a gamma-homophilous random edge.

struct SbmSweepConfig {
  std::vector<std::uint32_t> groups{300, 100};
  double q = 0.02;
  std::vector<double> ratios{1.0};  // p / q
  std::vector<double> gammas{1.0, 2.0, 3.0, 4.0};
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct SbmSweepPoint {
  double gamma = 0.0;
  double ratio = 0.0;
  RelativeBounds bounds;
  EffectSign predicted = EffectSign::kNeutral;
  // Per sampled graph: exact expected gain difference given the graph,
  // (P[closed wedge is bichromatic] - P[new edge is bichromatic]) / (E + 1).
  Summary effect;
};

std::vector<SbmSweepPoint> sbm_relative_sweep(const SbmSweepConfig& config);

// gamma, p_over_q, lower, upper, sim_effect_mean, sim_effect_ci (99% half-width)
Table sbm_sweep_table(const std::vector<SbmSweepPoint>& points);

// ---------------------------------------------------------------------------
// JR growth trajectories.

struct JrTrajectoryConfig {
  JrParams params;
  std::uint64_t t_max = 10000;
  std::size_t replicates = 20;
  SeedKind seed_kind = SeedKind::kComplete;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct JrTrajectoryPoint {
  std::uint64_t t = 0;
  Summary f;            // integration over all links
  double theory = 0.0;  // exact finite-t mean field
};

// Empty `times` means log_times(t_max).
std::vector<JrTrajectoryPoint> jr_trajectory(const JrTrajectoryConfig& config,
                                             std::vector<std::uint64_t> times = {});

// t, f_sim_mean, f_sim_ci, f_theory
Table jr_trajectory_table(const std::vector<JrTrajectoryPoint>& points);

// ---------------------------------------------------------------------------
// Paired intervention runs.

struct InterventionConfig {
  JrParams params;
  InterventionPlan plan;
  std::uint64_t t_max = 10000;
  std::size_t replicates = 50;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct InterventionPoint {
  std::uint64_t t = 0;
  Summary baseline;
  Summary treated;
  Summary delta;        // paired differences
  double theory = 0.0;  // immediate effect at T+I, long-term effect after
};

// Reports T, T+I and the log grid beyond T+I.
std::vector<InterventionPoint> intervention_experiment(const InterventionConfig& config);

// t, f_baseline_mean, f_treated_mean, delta_sim_mean, delta_sim_ci, delta_theory
Table intervention_table(const std::vector<InterventionPoint>& points);

// ---------------------------------------------------------------------------
// Fixed-node model grid.

struct FixedNodeGridConfig {
  std::vector<double> s_values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> c_values{0.0, 0.3, 0.6, 0.9};
  double s_prime = 0.5;
  std::uint32_t nodes = 200;  // two equal groups
  double mean_degree = 10.0;
  std::uint64_t time_units = 100;  // one unit = one iteration per edge
  std::size_t replicates = 4;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct FixedNodePoint {
  double s = 0.0;
  double c = 0.0;
  double theory = 0.0;  // stable equilibrium reached from the initial edge mix
  Summary sim;          // time average over the second half of each run
};

std::vector<FixedNodePoint> fixed_node_grid(const FixedNodeGridConfig& config);

// s, c, integration_theory, integration_sim_mean, integration_sim_ci
Table fixed_node_table(const std::vector<FixedNodePoint>& points);

}  // namespace netseg

#endif  // NETSEG_EXPERIMENTS_HPP_
