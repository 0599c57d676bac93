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

#ifndef NETSEG_JR_MODEL_HPP_
#define NETSEG_JR_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netseg/graph.hpp"
#include "netseg/rng.hpp"
#include "netseg/sbm.hpp"

namespace netseg {

// Jackson-Rogers growth with K node types. Each arrival links to N_S random
// same-type nodes and N_D random other-type nodes (phase 1), then to N_F
// nodes reached through out-links of those initial friends (phase 2); a
// fraction alpha of the phase-2 links goes through same-type friends.
struct JrParams {
  std::uint32_t num_types = 2;
  std::vector<double> type_dist;  // empty means uniform
  double n_s = 0.0;
  double n_d = 0.0;
  double n_f = 0.0;
  double alpha = 0.5;

  // Shape checks; alpha's open range (1/K, 1) is only enforced when asked,
  // since the simulator is defined for any alpha in [0, 1].
  void validate(bool require_alpha_range) const;
  std::vector<double> type_probabilities() const;
};

struct JrDerived {
  double n = 0.0;    // N_S + N_D + N_F
  double m_r = 0.0;  // (N_S + N_D) / N
  double m_s = 0.0;  // N_F / N
  double d_r = 0.0;  // (K N_S / (N_S + N_D) - 1) / (K - 1)
  double d_s = 0.0;  // (K alpha - 1) / (K - 1)
};

JrDerived derive(const JrParams& params);

// Long-run integration. Throws kAlphaOutOfRange unless 1/K < alpha < 1.
double equilibrium_integration(const JrParams& params);
// The same closed form without the alpha range check.
double equilibrium_formula(const JrParams& params);

// Expected monochromatic link count after t arrivals: the linear large-t form,
// and the finite sum over arrival times it approximates.
double mono_trajectory(const JrParams& params, std::uint64_t t);
double mono_trajectory_exact(const JrParams& params, std::uint64_t t);
// 1 - mono / (N t) for the two forms above.
double integration_at(const JrParams& params, std::uint64_t t);
double integration_at_exact(const JrParams& params, std::uint64_t t);

struct JrEffects {
  EffectSign absolute = EffectSign::kNeutral;
  EffectSign relative = EffectSign::kNeutral;
};

// Both effects of raising N_F are positive iff N_S > N_D / (K - 1).
JrEffects effect_predicates(const JrParams& params);

// ----------------------------------------------------------------------------
// Simulation

enum class SeedKind { kComplete, kSegregated };

// 2N nodes with types drawn from the type distribution, linked in both
// directions: all pairs (complete) or same-type pairs only (segregated).
TypedGraph jr_seed_graph(const JrParams& params, SeedKind kind, std::uint64_t seed);

// Link counts for one arrival.
struct ArrivalCounts {
  std::uint32_t similar = 0;
  std::uint32_t dissimilar = 0;
  std::uint32_t friends_similar = 0;
  std::uint32_t friends_dissimilar = 0;
};

// Integer counts for one arrival from real-valued targets, rounded
// stochastically so expectations are exact. Phase-1 links total
// round(similar + dissimilar); phase-2 similar links are alpha of the
// rounded phase-2 total.
ArrivalCounts round_counts(double similar, double dissimilar, double friends, double alpha,
                           Rng& rng);

struct ArrivalRecord {
  NodeId node = 0;
  TypeId type = 0;
  std::uint64_t shortfall = 0;
};

// Incremental simulator. Arrival t (1-based) draws from its own random
// stream, so two simulators with the same seed that differ only in the
// counts of some arrivals still share randomness everywhere else.
class JrSimulator {
 public:
  JrSimulator(JrParams params, TypedGraph seed_graph, std::uint64_t seed);

  // Adds arrival number arrivals()+1 with the parameters' own counts, N_S
  // shifted by delta_ns and N_D by -delta_ns.
  ArrivalRecord step(double delta_ns = 0.0);
  // Same with explicit counts; an explicit type overrides the type draw.
  ArrivalRecord step(const ArrivalCounts& counts, std::optional<TypeId> type = std::nullopt);

  const TypedGraph& graph() const noexcept { return graph_; }
  std::uint64_t arrivals() const noexcept { return arrivals_; }
  std::uint64_t shortfall() const noexcept { return shortfall_; }
  // Integration over every link, and over links created by arrivals only.
  double integration() const;
  double arrival_integration() const;
  std::uint64_t arrival_mono() const noexcept { return arrival_mono_; }
  std::uint64_t arrival_bi() const noexcept { return arrival_bi_; }

  // Phase-1 friends of the most recent arrival (for generators that need
  // to know the ground truth).
  const std::vector<NodeId>& last_initial_friends() const noexcept { return initial_; }
  const std::vector<NodeId>& last_friend_links() const noexcept { return phase2_; }

 private:
  Rng arrival_rng(std::uint64_t t) const { return Rng(seed_, kArrivalStream).split(t); }
  TypeId draw_type(Rng& rng) const;
  ArrivalRecord run_arrival(const ArrivalCounts& counts, TypeId type, Rng& rng);
  // Links the newcomer to min(k, |candidates|) distinct unlinked candidates;
  // returns the shortfall.
  std::uint64_t draw_links(NodeId u, const std::vector<NodeId>& candidates, std::uint32_t k, Rng& rng,
                           std::vector<NodeId>& sink);
  // Unlinked out-neighbours of `friends`, deduplicated.
  std::vector<NodeId> friend_pool(const std::vector<NodeId>& friends);
  void link(NodeId u, NodeId v);

  static constexpr std::uint64_t kArrivalStream = 0x4a52;

  JrParams params_;
  std::vector<double> type_cdf_;
  std::uint64_t seed_;
  TypedGraph graph_;
  std::vector<std::vector<NodeId>> by_type_;
  std::uint64_t arrivals_ = 0;
  std::uint64_t shortfall_ = 0;
  std::uint64_t all_mono_ = 0;
  std::uint64_t all_bi_ = 0;
  std::uint64_t arrival_mono_ = 0;
  std::uint64_t arrival_bi_ = 0;
  std::vector<std::uint64_t> linked_stamp_;
  std::vector<std::uint64_t> pool_stamp_;
  std::uint64_t linked_now_ = 0;
  std::uint64_t pool_now_ = 0;
  std::vector<NodeId> initial_;
  std::vector<NodeId> phase2_;
};

struct JrRun {
  std::vector<double> integration;          // after arrival t, index t-1
  std::vector<double> arrival_integration;  // same, seed links excluded
  TypedGraph graph;
  std::uint64_t shortfall = 0;
};

// Runs t_max arrivals from `seed_graph` (default: complete seed graph).
JrRun simulate_jr(const JrParams& params, std::uint64_t t_max, std::uint64_t seed,
                  std::optional<TypedGraph> seed_graph = std::nullopt);

// ----------------------------------------------------------------------------
// Interventions

// Temporary change of phase-1 similar links at arrivals T+1 .. T+I with
// N_S + N_D held fixed.
struct InterventionPlan {
  std::uint64_t T = 0;
  std::uint64_t I = 0;
  std::vector<double> delta_ns;  // size I
  double rate_limit = 0.0;

  // Throws kInvalidArgument if a shifted count would go negative.
  void validate(const JrParams& params) const;
};

struct ImmediateEffect {
  std::vector<double> per_step;  // effect of intervention i on f(T+I)
  double total = 0.0;
  std::vector<std::string> warnings;
};

ImmediateEffect intervention_immediate_effect(const JrParams& params, const InterventionPlan& plan);

struct LongTermEffect {
  std::vector<double> per_step;
  double total = 0.0;
  std::vector<std::string> warnings;
};

// Effect on f(t) long after the window: -(1/(N T)) (t/T)^(m_s d_s - 1) dN_S
// per intervention.
LongTermEffect intervention_longterm_effect(const JrParams& params, const InterventionPlan& plan,
                                            double t);

enum class PlannerModel {
  // Per-step change (1/(NT)) [x_j - (1 - m_s d_s)(1/T) sum_{i<j} x_i]; the
  // unclamped optimum has the geometric closed form.
  kFirstOrder,
  // Keeps the (1 - j/T) horizon factor on the current step.
  kHorizon,
};

struct OptimalPlan {
  InterventionPlan plan;
  std::vector<double> step_change;  // predicted f(T+j) - f(T+j-1)
  double gain = 0.0;                // sum of step changes
  bool clamped = false;             // the -N_S bound was active somewhere
  bool closed_form_regime = false;  // N_S >= N T Delta T / (T - 2I)
  std::vector<std::string> warnings;
};

OptimalPlan optimal_interventions(const JrParams& params, std::uint64_t T, std::uint64_t I,
                                  double rate_limit,
                                  PlannerModel model = PlannerModel::kFirstOrder);

// dN_S at step j (1-based) of the unclamped optimum.
double optimal_intervention_closed_form(const JrParams& params, std::uint64_t T,
                                        double rate_limit, std::uint64_t j);

struct PairedRun {
  std::vector<double> baseline;  // integration after each arrival
  std::vector<double> treated;
  std::uint64_t baseline_shortfall = 0;
  std::uint64_t treated_shortfall = 0;
};

// Baseline and treated runs from the same seed; arrivals T+i of the treated
// run use N_S + dN_S and N_D - dN_S (rounded stochastically).
PairedRun simulate_with_interventions(const JrParams& params, const InterventionPlan& plan,
                                      std::uint64_t t_max, std::uint64_t seed,
                                      std::optional<TypedGraph> seed_graph = std::nullopt);

}  // namespace netseg

#endif  // NETSEG_JR_MODEL_HPP_
