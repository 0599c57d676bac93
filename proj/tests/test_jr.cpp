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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "netseg/errors.hpp"
#include "netseg/graph_ops.hpp"
#include "netseg/jr_model.hpp"
#include "netseg/rng.hpp"
#include "netseg/stats.hpp"

using namespace netseg;

namespace {

JrParams jr(double ns, double nd, double nf, double alpha, std::uint32_t k = 2) {
  JrParams p;
  p.num_types = k;
  p.n_s = ns;
  p.n_d = nd;
  p.n_f = nf;
  p.alpha = alpha;
  return p;
}

InterventionPlan plan_of(std::uint64_t T, std::vector<double> d) {
  InterventionPlan p;
  p.T = T;
  p.I = d.size();
  p.delta_ns = std::move(d);
  return p;
}

}  // namespace

TEST_CASE("equilibrium integration closed form") {
  CHECK(equilibrium_integration(jr(6, 2, 4, 0.75)) == doctest::Approx(0.3));
  CHECK(equilibrium_integration(jr(3, 1, 0, 0.75)) == doctest::Approx(0.25));
  CHECK(equilibrium_integration(jr(3, 3, 5, 0.8)) == doctest::Approx(0.5));
  CHECK(equilibrium_integration(jr(3, 3, 1, 0.6)) == doctest::Approx(0.5));

  double last = 0.0;
  for (double nf : {0.0, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double f = equilibrium_integration(jr(6, 2, nf, 0.75));
    CHECK(f > last);
    last = f;
  }
  try {
    equilibrium_integration(jr(6, 2, 4, 0.4));
    FAIL("alpha below 1/K accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAlphaOutOfRange);
  }
}

TEST_CASE("closed form does not depend on the type distribution") {
  auto p = jr(5, 3, 6, 0.7, 3);
  const double uniform = equilibrium_integration(p);
  p.type_dist = {0.6, 0.3, 0.1};
  CHECK(equilibrium_integration(p) == uniform);
}

TEST_CASE("mono trajectory") {
  const auto p = jr(3, 1, 0, 0.75);
  const auto d = derive(p);
  CHECK(d.m_s == 0.0);
  const double t = 500;
  CHECK(mono_trajectory(p, 500) ==
        doctest::Approx(t * d.n * d.m_r * (1.0 + d.d_r) / 2.0));

  const auto q = jr(6, 2, 4, 0.75);
  CHECK(integration_at(q, 1000000) == doctest::Approx(equilibrium_integration(q)).epsilon(1e-9));
  CHECK(std::abs(integration_at_exact(q, 10000000) - equilibrium_integration(q)) < 1e-3);
}

TEST_CASE("effect predicates") {
  auto e = effect_predicates(jr(3, 1, 2, 0.75));
  CHECK(e.absolute == EffectSign::kPositive);
  CHECK(e.relative == EffectSign::kPositive);
  e = effect_predicates(jr(1, 2, 2, 0.75, 3));
  CHECK(e.absolute == EffectSign::kNeutral);
  CHECK(e.relative == EffectSign::kNeutral);
  e = effect_predicates(jr(1, 3, 2, 0.75));
  CHECK(e.absolute == EffectSign::kNegative);
  CHECK(e.relative == EffectSign::kNegative);
}

TEST_CASE("stochastic rounding keeps expected counts") {
  Rng rng(3);
  double s = 0, d = 0, fs = 0, fd = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto c = round_counts(2.4, 1.3, 3.5, 0.7, rng);
    s += c.similar;
    d += c.dissimilar;
    fs += c.friends_similar;
    fd += c.friends_dissimilar;
  }
  CHECK(s / n + d / n == doctest::Approx(3.7).epsilon(0.005));
  CHECK(s / n == doctest::Approx(2.4).epsilon(0.01));
  CHECK(fs / n == doctest::Approx(3.5 * 0.7).epsilon(0.01));
  CHECK(fd / n == doctest::Approx(3.5 * 0.3).epsilon(0.02));
}

TEST_CASE("seed graphs") {
  const auto p = jr(6, 2, 4, 0.75);
  const auto seg = jr_seed_graph(p, SeedKind::kSegregated, 1);
  CHECK(seg.node_count() == 24);
  CHECK(integration(seg).integration == 0.0);
  const auto full = jr_seed_graph(p, SeedKind::kComplete, 1);
  CHECK(full.edge_count() == 24 * 23);
}

TEST_CASE("simulated integration approaches the closed form") {
  const auto p = jr(6, 2, 4, 0.75);
  std::vector<double> finals;
  for (std::uint64_t r = 0; r < 20; ++r) finals.push_back(simulate_jr(p, 10000, r).integration.back());
  CHECK(std::abs(summarize(finals).mean - 0.3) < 0.02);

  const auto a = simulate_jr(p, 300, 5);
  const auto b = simulate_jr(p, 300, 5);
  CHECK(a.integration == b.integration);
  CHECK(a.graph.edges() == b.graph.edges());
}

TEST_CASE("immediate intervention effect") {
  const auto p = jr(6, 2, 4, 0.75);
  const auto d = derive(p);
  CHECK(intervention_immediate_effect(p, plan_of(2000, std::vector<double>(50, 0.0))).total == 0.0);

  std::vector<double> last(50, 0.0);
  last.back() = -2.0;
  const auto e = intervention_immediate_effect(p, plan_of(2000, last));
  CHECK(e.per_step.back() == doctest::Approx(2.0 / (d.n * 2050.0)));

  const auto u = intervention_immediate_effect(p, plan_of(2000, std::vector<double>(50, -1.0)));
  CHECK(u.total > 0.0);
  for (std::size_t i = 1; i < u.per_step.size(); ++i) CHECK(u.per_step[i - 1] > u.per_step[i]);

  CHECK_FALSE(intervention_immediate_effect(p, plan_of(100, std::vector<double>(50, -1.0))).warnings.empty());
  CHECK_THROWS_AS(intervention_immediate_effect(p, plan_of(2000, {-7.0})), Error);
}

TEST_CASE("long-term intervention effect") {
  const auto p = jr(6, 2, 4, 0.75);
  const auto d = derive(p);
  const auto at_t = intervention_longterm_effect(p, plan_of(2000, {-2.0}), 2000.0);
  CHECK(at_t.total == doctest::Approx(2.0 / (d.n * 2000.0)));
  CHECK(d.m_s * d.d_s < 1.0);
  const auto later = intervention_longterm_effect(p, plan_of(2000, {-2.0}), 20000.0);
  CHECK(later.total < at_t.total);
  CHECK(later.total > 0.0);

  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const std::uint32_t k = 2 + static_cast<std::uint32_t>(rng.below(5));
    auto q = jr(rng.uniform() * 10, rng.uniform() * 10 + 0.01, rng.uniform() * 10, 0.0, k);
    q.alpha = 1.0 / k + (1.0 - 1.0 / k) * rng.uniform();
    const auto dq = derive(q);
    CHECK(dq.m_s * dq.d_s < 1.0);
  }
}

TEST_CASE("optimal interventions") {
  const auto p = jr(6, 2, 4, 0.75);
  const auto zero = optimal_interventions(p, 2000, 50, 0.0);
  for (double x : zero.plan.delta_ns) CHECK(x == 0.0);
  CHECK(zero.gain == 0.0);

  const double rate = 1e-4;
  for (auto model : {PlannerModel::kFirstOrder, PlannerModel::kHorizon}) {
    const auto opt = optimal_interventions(p, 2000, 50, rate, model);
    REQUIRE(opt.step_change.size() == 50);
    for (double s : opt.step_change) CHECK(s <= rate + 1e-12);
    if (model == PlannerModel::kFirstOrder) {
      CHECK(opt.closed_form_regime);
      CHECK_FALSE(opt.clamped);
      for (std::uint64_t j = 1; j <= 50; ++j) {
        CHECK(std::abs(opt.plan.delta_ns[j - 1] - optimal_intervention_closed_form(p, 2000, rate, j)) < 1e-9);
      }
      CHECK(std::abs(opt.gain - 50 * rate) < 1e-9);
    }
  }

  // A large rate limit drives N_S against its bound.
  const auto clamped = optimal_interventions(p, 2000, 50, 1e-2);
  CHECK(clamped.clamped);
  for (double x : clamped.plan.delta_ns) CHECK(x >= -6.0 - 1e-12);
  for (double s : clamped.step_change) CHECK(s <= 1e-2 + 1e-12);
}

TEST_CASE("paired runs share randomness") {
  const auto p = jr(6, 2, 4, 0.75);
  const auto same = simulate_with_interventions(p, plan_of(200, std::vector<double>(10, 0.0)), 400, 3);
  CHECK(same.baseline == same.treated);

  const auto diff = simulate_with_interventions(p, plan_of(200, std::vector<double>(10, -2.0)), 400, 3);
  CHECK(std::equal(diff.baseline.begin(), diff.baseline.begin() + 200, diff.treated.begin()));
  CHECK(diff.baseline.back() != diff.treated.back());
}
