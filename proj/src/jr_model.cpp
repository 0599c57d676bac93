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

#include "netseg/jr_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "netseg/errors.hpp"
#include "netseg/graph_ops.hpp"

namespace netseg {
namespace {

constexpr std::uint64_t kSeedStream = 0x5eed;

// (x^c - 1) / c, continuous at c = 0.
double power_gap(double x, double c) {
  const double lx = std::log(x);
  if (std::abs(c * lx) < 1e-300 || c == 0.0) return lx;
  return std::expm1(c * lx) / c;
}

std::string fmt(const char* what, double a, double b) {
  std::ostringstream os;
  os << what << " (" << a << " < " << b << ")";
  return os.str();
}

}  // namespace

void JrParams::validate(bool require_alpha_range) const {
  if (num_types < 2) throw Error(ErrorCode::kInvalidArgument, "JR model needs K >= 2");
  if (!type_dist.empty()) {
    if (type_dist.size() != num_types) {
      throw Error(ErrorCode::kInvalidArgument, "type distribution must have K entries");
    }
    double total = 0.0;
    for (double x : type_dist) {
      if (!(x >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "type probabilities must be >= 0");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw Error(ErrorCode::kInvalidArgument, "type distribution must sum to 1");
    }
  }
  if (!(n_s >= 0.0) || !(n_d >= 0.0) || !(n_f >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "N_S, N_D, N_F must be >= 0");
  }
  if (!(n_s + n_d > 0.0)) throw Error(ErrorCode::kInvalidArgument, "N_S + N_D must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
  if (require_alpha_range) {
    const double lo = 1.0 / num_types;
    if (!(alpha > lo && alpha < 1.0)) {
      throw Error(ErrorCode::kAlphaOutOfRange, "alpha must lie strictly between 1/K and 1");
    }
  }
}

std::vector<double> JrParams::type_probabilities() const {
  if (!type_dist.empty()) return type_dist;
  return std::vector<double>(num_types, 1.0 / num_types);
}

JrDerived derive(const JrParams& params) {
  params.validate(false);
  const double k = params.num_types;
  JrDerived d;
  d.n = params.n_s + params.n_d + params.n_f;
  d.m_r = (params.n_s + params.n_d) / d.n;
  d.m_s = params.n_f / d.n;
  d.d_r = (k * params.n_s / (params.n_s + params.n_d) - 1.0) / (k - 1.0);
  d.d_s = (k * params.alpha - 1.0) / (k - 1.0);
  return d;
}

double equilibrium_integration(const JrParams& params) {
  params.validate(true);
  return equilibrium_formula(params);
}

double equilibrium_formula(const JrParams& params) {
  params.validate(false);
  const double k = params.num_types;
  const double tc = (1.0 - params.alpha) * params.n_f;
  return (params.n_d + tc) / (params.n_s + params.n_d + k / (k - 1.0) * tc);
}

double mono_trajectory(const JrParams& params, std::uint64_t t) {
  if (t < 1) throw Error(ErrorCode::kInvalidArgument, "t must be >= 1");
  const auto d = derive(params);
  const double k = params.num_types;
  return static_cast<double>(t) * (d.n * d.m_r / k) *
         (1.0 / (1.0 - d.m_s) + (k - 1.0) * d.d_r / (1.0 - d.m_s * d.d_s));
}

double mono_trajectory_exact(const JrParams& params, std::uint64_t t) {
  if (t < 1) throw Error(ErrorCode::kInvalidArgument, "t must be >= 1");
  const auto d = derive(params);
  const double k = params.num_types;
  const double td = static_cast<double>(t);
  double sum = 0.0;
  for (std::uint64_t t0 = 1; t0 <= t; ++t0) {
    const double x = td / static_cast<double>(t0);
    sum += power_gap(x, d.m_s) + (k - 1.0) * d.d_r * power_gap(x, d.m_s * d.d_s);
  }
  return (d.n * d.m_r / k) * sum;
}

double integration_at(const JrParams& params, std::uint64_t t) {
  const auto d = derive(params);
  return 1.0 - mono_trajectory(params, t) / (d.n * static_cast<double>(t));
}

double integration_at_exact(const JrParams& params, std::uint64_t t) {
  const auto d = derive(params);
  return 1.0 - mono_trajectory_exact(params, t) / (d.n * static_cast<double>(t));
}

JrEffects effect_predicates(const JrParams& params) {
  params.validate(false);
  const double threshold = params.n_d / (params.num_types - 1.0);
  JrEffects e;
  e.absolute = compare_with_tolerance(params.n_s, threshold);
  // Holding N and N_S / N_D fixed gives the same condition.
  e.relative = e.absolute;
  return e;
}

// ----------------------------------------------------------------------------

TypedGraph jr_seed_graph(const JrParams& params, SeedKind kind, std::uint64_t seed) {
  params.validate(false);
  const auto probs = params.type_probabilities();
  const auto size = static_cast<NodeId>(
      std::max(2.0, 2.0 * std::ceil(params.n_s + params.n_d + params.n_f)));
  Rng rng(seed, kSeedStream);
  std::vector<TypeId> types(size);
  for (auto& t : types) {
    const double u = rng.uniform();
    double acc = 0.0;
    t = params.num_types - 1;
    for (TypeId k = 0; k < params.num_types; ++k) {
      acc += probs[k];
      if (u < acc) {
        t = k;
        break;
      }
    }
  }
  TypedGraph g(std::move(types), params.num_types, true);
  for (NodeId u = 0; u < size; ++u) {
    for (NodeId v = 0; v < size; ++v) {
      if (u == v) continue;
      if (kind == SeedKind::kSegregated && g.type(u) != g.type(v)) continue;
      g.add_edge(u, v);
    }
  }
  return g;
}

ArrivalCounts round_counts(double similar, double dissimilar, double friends, double alpha,
                           Rng& rng) {
  ArrivalCounts c;
  const auto phase1 = rng.round_stochastic(similar + dissimilar);
  const auto s = std::min(rng.round_stochastic(similar), phase1);
  c.similar = static_cast<std::uint32_t>(s);
  c.dissimilar = static_cast<std::uint32_t>(phase1 - s);
  const auto f = rng.round_stochastic(friends);
  const auto fs = std::min(rng.round_stochastic(alpha * static_cast<double>(f)), f);
  c.friends_similar = static_cast<std::uint32_t>(fs);
  c.friends_dissimilar = static_cast<std::uint32_t>(f - fs);
  return c;
}

JrSimulator::JrSimulator(JrParams params, TypedGraph seed_graph, std::uint64_t seed)
    : params_(std::move(params)), seed_(seed), graph_(std::move(seed_graph)) {
  params_.validate(false);
  if (!graph_.directed()) throw Error(ErrorCode::kInvalidArgument, "JR seed graph must be directed");
  if (graph_.num_types() != params_.num_types) {
    throw Error(ErrorCode::kInvalidArgument, "seed graph K differs from the parameters");
  }
  const auto probs = params_.type_probabilities();
  double acc = 0.0;
  for (double p : probs) {
    acc += p;
    type_cdf_.push_back(acc);
  }
  by_type_ = graph_.nodes_by_type();
  for (NodeId u = 0; u < graph_.node_count(); ++u) {
    for (NodeId v : graph_.neighbors(u)) {
      if (v <= u) continue;
      (graph_.type(u) == graph_.type(v) ? all_mono_ : all_bi_) += 1;
    }
  }
  linked_stamp_.assign(graph_.node_count(), 0);
  pool_stamp_.assign(graph_.node_count(), 0);
}

TypeId JrSimulator::draw_type(Rng& rng) const {
  const double u = rng.uniform();
  for (TypeId k = 0; k < type_cdf_.size(); ++k) {
    if (u < type_cdf_[k]) return k;
  }
  return static_cast<TypeId>(type_cdf_.size() - 1);
}

void JrSimulator::link(NodeId u, NodeId v) {
  graph_.add_edge(u, v);
  linked_stamp_[v] = linked_now_;
  const bool mono = graph_.type(u) == graph_.type(v);
  (mono ? all_mono_ : all_bi_) += 1;
  (mono ? arrival_mono_ : arrival_bi_) += 1;
}

std::uint64_t JrSimulator::draw_links(NodeId u, const std::vector<NodeId>& candidates,
                                      std::uint32_t k, Rng& rng, std::vector<NodeId>& sink) {
  if (k == 0) return 0;
  std::size_t available = 0;
  for (NodeId v : candidates) available += linked_stamp_[v] != linked_now_;
  if (available <= k) {
    for (NodeId v : candidates) {
      if (linked_stamp_[v] == linked_now_) continue;
      link(u, v);
      sink.push_back(v);
    }
    return k - available;
  }
  if (2 * static_cast<std::size_t>(k) <= available) {
    // Rejection without replacement; at least half the draws are fresh.
    std::uint32_t taken = 0;
    while (taken < k) {
      const NodeId v = candidates[rng.below(candidates.size())];
      if (linked_stamp_[v] == linked_now_) continue;
      link(u, v);
      sink.push_back(v);
      ++taken;
    }
    return 0;
  }
  std::vector<NodeId> open;
  open.reserve(available);
  for (NodeId v : candidates) {
    if (linked_stamp_[v] != linked_now_) open.push_back(v);
  }
  for (std::uint32_t i = 0; i < k; ++i) {
    std::swap(open[i], open[i + rng.below(open.size() - i)]);
    link(u, open[i]);
    sink.push_back(open[i]);
  }
  return 0;
}

std::vector<NodeId> JrSimulator::friend_pool(const std::vector<NodeId>& friends) {
  ++pool_now_;
  std::vector<NodeId> pool;
  for (NodeId f : friends) {
    for (NodeId w : graph_.out_neighbors(f)) {
      if (linked_stamp_[w] == linked_now_ || pool_stamp_[w] == pool_now_) continue;
      pool_stamp_[w] = pool_now_;
      pool.push_back(w);
    }
  }
  return pool;
}

ArrivalRecord JrSimulator::step(double delta_ns) {
  Rng base = arrival_rng(arrivals_ + 1);
  Rng type_rng = base.split(1);
  const TypeId type = draw_type(type_rng);
  Rng count_rng = base.split(0);
  const auto counts = round_counts(params_.n_s + delta_ns, params_.n_d - delta_ns, params_.n_f,
                                   params_.alpha, count_rng);
  Rng rng = base.split(2);
  return run_arrival(counts, type, rng);
}

ArrivalRecord JrSimulator::step(const ArrivalCounts& counts, std::optional<TypeId> type) {
  Rng base = arrival_rng(arrivals_ + 1);
  Rng type_rng = base.split(1);
  const TypeId t = type ? *type : draw_type(type_rng);
  if (t >= params_.num_types) throw Error(ErrorCode::kInvalidArgument, "arrival type outside [0, K)");
  Rng rng = base.split(2);
  return run_arrival(counts, t, rng);
}

ArrivalRecord JrSimulator::run_arrival(const ArrivalCounts& counts, TypeId type, Rng& rng) {
  const NodeId u = graph_.add_node(type);
  linked_stamp_.push_back(0);
  pool_stamp_.push_back(0);
  ++linked_now_;
  linked_stamp_[u] = linked_now_;
  initial_.clear();
  phase2_.clear();
  const TypeId k = params_.num_types;

  std::uint64_t shortfall = draw_links(u, by_type_[type], counts.similar, rng, initial_);
  const std::size_t n_similar_friends = initial_.size();

  // Dissimilar phase-1 links are spread evenly over the other K - 1 types;
  // the remainder goes to randomly chosen types.
  std::vector<TypeId> others;
  for (TypeId t = 0; t < k; ++t) {
    if (t != type) others.push_back(t);
  }
  std::vector<std::uint32_t> per_type(k, counts.dissimilar / (k - 1));
  std::uint32_t rem = counts.dissimilar % (k - 1);
  for (std::uint32_t i = 0; i < rem; ++i) {
    std::swap(others[i], others[i + rng.below(others.size() - i)]);
    ++per_type[others[i]];
  }
  for (TypeId t = 0; t < k; ++t) {
    if (t == type) continue;
    shortfall += draw_links(u, by_type_[t], per_type[t], rng, initial_);
  }

  const std::vector<NodeId> similar_friends(initial_.begin(),
                                            initial_.begin() + static_cast<std::ptrdiff_t>(n_similar_friends));
  const std::vector<NodeId> dissimilar_friends(
      initial_.begin() + static_cast<std::ptrdiff_t>(n_similar_friends), initial_.end());

  // Phase 2 through similar initial friends.
  shortfall += draw_links(u, friend_pool(similar_friends), counts.friends_similar, rng, phase2_);

  // Phase 2 through dissimilar initial friends: an equal share per friend,
  // pooled by the friend's type.
  if (counts.friends_dissimilar > 0) {
    if (dissimilar_friends.empty()) {
      shortfall += counts.friends_dissimilar;
    } else {
      const auto m = static_cast<std::uint32_t>(dissimilar_friends.size());
      std::vector<std::uint32_t> share(m, counts.friends_dissimilar / m);
      std::vector<std::uint32_t> order(m);
      std::iota(order.begin(), order.end(), 0u);
      const std::uint32_t extra = counts.friends_dissimilar % m;
      for (std::uint32_t i = 0; i < extra; ++i) {
        std::swap(order[i], order[i + rng.below(m - i)]);
        ++share[order[i]];
      }
      std::vector<std::uint32_t> type_share(k, 0);
      std::vector<std::vector<NodeId>> type_friends(k);
      for (std::uint32_t i = 0; i < m; ++i) {
        const TypeId t = graph_.type(dissimilar_friends[i]);
        type_share[t] += share[i];
        type_friends[t].push_back(dissimilar_friends[i]);
      }
      for (TypeId t = 0; t < k; ++t) {
        if (type_share[t] == 0) continue;
        shortfall += draw_links(u, friend_pool(type_friends[t]), type_share[t], rng, phase2_);
      }
    }
  }

  by_type_[type].push_back(u);
  ++arrivals_;
  shortfall_ += shortfall;
  return {u, type, shortfall};
}

double JrSimulator::integration() const {
  const auto total = all_mono_ + all_bi_;
  if (total == 0) throw Error(ErrorCode::kUndefinedIntegration, "no links yet");
  return static_cast<double>(all_bi_) / static_cast<double>(total);
}

double JrSimulator::arrival_integration() const {
  const auto total = arrival_mono_ + arrival_bi_;
  if (total == 0) throw Error(ErrorCode::kUndefinedIntegration, "no arrival links yet");
  return static_cast<double>(arrival_bi_) / static_cast<double>(total);
}

JrRun simulate_jr(const JrParams& params, std::uint64_t t_max, std::uint64_t seed,
                  std::optional<TypedGraph> seed_graph) {
  TypedGraph start = seed_graph ? std::move(*seed_graph)
                                : jr_seed_graph(params, SeedKind::kComplete, seed);
  JrSimulator sim(params, std::move(start), seed);
  JrRun run;
  run.integration.reserve(t_max);
  run.arrival_integration.reserve(t_max);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::uint64_t t = 0; t < t_max; ++t) {
    sim.step();
    const bool any = sim.arrival_mono() + sim.arrival_bi() > 0;
    run.integration.push_back(any ? sim.integration() : nan);
    run.arrival_integration.push_back(any ? sim.arrival_integration() : nan);
  }
  run.shortfall = sim.shortfall();
  run.graph = sim.graph();
  return run;
}

// ----------------------------------------------------------------------------

void InterventionPlan::validate(const JrParams& params) const {
  params.validate(false);
  if (T < 1) throw Error(ErrorCode::kInvalidArgument, "intervention start T must be >= 1");
  if (delta_ns.size() != I) {
    throw Error(ErrorCode::kInvalidArgument, "plan needs exactly I entries in delta_ns");
  }
  for (double d : delta_ns) {
    if (!std::isfinite(d) || params.n_s + d < -1e-12 || params.n_d - d < -1e-12) {
      throw Error(ErrorCode::kInvalidArgument,
                  "each dN_S must keep N_S + dN_S and N_D - dN_S nonnegative");
    }
  }
  if (!(rate_limit >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "rate limit must be >= 0");
}

ImmediateEffect intervention_immediate_effect(const JrParams& params, const InterventionPlan& plan) {
  plan.validate(params);
  const auto d = derive(params);
  const double T = static_cast<double>(plan.T);
  const double I = static_cast<double>(plan.I);
  ImmediateEffect out;
  if (T < 20.0 * I) {
    out.warnings.push_back(fmt("T is not large against I; the approximation assumes T >= 20 I", T, 20.0 * I));
  }
  const double ds = d.d_s;
  for (std::uint64_t i = 1; i <= plan.I; ++i) {
    const double bracket = 1.0 + (params.n_f / (d.n * T)) * (I - static_cast<double>(i)) * ds;
    const double e = -bracket * plan.delta_ns[i - 1] / (d.n * (T + I));
    out.per_step.push_back(e);
    out.total += e;
  }
  return out;
}

LongTermEffect intervention_longterm_effect(const JrParams& params, const InterventionPlan& plan,
                                            double t) {
  plan.validate(params);
  const auto d = derive(params);
  const double T = static_cast<double>(plan.T);
  LongTermEffect out;
  if (!(t >= T)) throw Error(ErrorCode::kInvalidArgument, "t must be >= T");
  if (t < 5.0 * (T + static_cast<double>(plan.I))) {
    out.warnings.push_back(fmt("t is close to the intervention window; expected t >= 5 (T + I)", t,
                               5.0 * (T + static_cast<double>(plan.I))));
  }
  const double scale = std::pow(t / T, d.m_s * d.d_s - 1.0) / (d.n * T);
  for (double delta : plan.delta_ns) {
    const double e = -scale * delta;
    out.per_step.push_back(e);
    out.total += e;
  }
  return out;
}

double optimal_intervention_closed_form(const JrParams& params, std::uint64_t T, double rate_limit,
                                        std::uint64_t j) {
  const auto d = derive(params);
  const double td = static_cast<double>(T);
  const double base = 1.0 + 1.0 / td - d.m_s * d.d_s / td;
  return -d.n * td * rate_limit * std::pow(base, static_cast<double>(j) - 1.0);
}

OptimalPlan optimal_interventions(const JrParams& params, std::uint64_t T, std::uint64_t I,
                                  double rate_limit, PlannerModel model) {
  params.validate(false);
  if (!(rate_limit >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "rate limit must be >= 0");
  if (T < 1) throw Error(ErrorCode::kInvalidArgument, "T must be >= 1");
  if (model == PlannerModel::kHorizon && T <= I) {
    throw Error(ErrorCode::kInvalidArgument, "horizon planner needs T > I");
  }
  const auto d = derive(params);
  const double td = static_cast<double>(T);
  const double decay = 1.0 - d.m_s * d.d_s;

  OptimalPlan out;
  out.plan.T = T;
  out.plan.I = I;
  out.plan.rate_limit = rate_limit;
  if (td < 20.0 * static_cast<double>(I)) {
    out.warnings.push_back(fmt("T is not large against I; the approximation assumes T >= 20 I", td,
                               20.0 * static_cast<double>(I)));
  }
  out.closed_form_regime = td > 2.0 * static_cast<double>(I) &&
                           params.n_s >= d.n * td * rate_limit * td / (td - 2.0 * static_cast<double>(I));

  double prior = 0.0;  // sum of earlier x_i = -dN_S
  for (std::uint64_t j = 1; j <= I; ++j) {
    const double jd = static_cast<double>(j);
    double x;
    if (model == PlannerModel::kFirstOrder) {
      x = d.n * td * rate_limit + decay * prior / td;
    } else {
      x = d.n * td * rate_limit * (td / (td - jd)) + decay * prior / (td - jd);
    }
    if (x > params.n_s) {
      x = params.n_s;
      out.clamped = true;
    }
    const double own = model == PlannerModel::kFirstOrder ? x : (1.0 - jd / td) * x;
    const double step = (own - decay * prior / td) / (d.n * td);
    out.plan.delta_ns.push_back(-x);
    out.step_change.push_back(step);
    out.gain += step;
    prior += x;
  }
  return out;
}

PairedRun simulate_with_interventions(const JrParams& params, const InterventionPlan& plan,
                                      std::uint64_t t_max, std::uint64_t seed,
                                      std::optional<TypedGraph> seed_graph) {
  plan.validate(params);
  TypedGraph start = seed_graph ? std::move(*seed_graph)
                                : jr_seed_graph(params, SeedKind::kComplete, seed);
  JrSimulator baseline(params, start, seed);
  JrSimulator treated(params, std::move(start), seed);
  PairedRun run;
  run.baseline.reserve(t_max);
  run.treated.reserve(t_max);
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    double delta = 0.0;
    if (t > plan.T && t <= plan.T + plan.I) delta = plan.delta_ns[t - plan.T - 1];
    baseline.step();
    treated.step(delta);
    run.baseline.push_back(baseline.arrival_integration());
    run.treated.push_back(treated.arrival_integration());
  }
  run.baseline_shortfall = baseline.shortfall();
  run.treated_shortfall = treated.shortfall();
  return run;
}

}  // namespace netseg
