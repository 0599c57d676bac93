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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "netseg/errors.hpp"
#include "netseg/estimation.hpp"
#include "netseg/rng.hpp"
#include "oracles.hpp"

using namespace netseg;

namespace {

using Arcs = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

std::string line(const std::string& id, int year, const std::string& fos, const std::vector<std::string>& refs) {
  std::string r = "[";
  for (std::size_t i = 0; i < refs.size(); ++i) r += (i ? ",\"" : "\"") + refs[i] + "\"";
  r += "]";
  return "{\"id\":\"" + id + "\",\"year\":" + std::to_string(year) + ",\"fos\":[{\"name\":\"" + fos +
         "\",\"w\":0.5}],\"references\":" + r + "}\n";
}

// Evidence for nodes with no mediators anywhere: a single all-phase-1
// assignment with the given (similar, dissimilar) reference counts.
NodeEvidence phase1_only(double similar, double dissimilar) {
  NodeEvidence e;
  e.counts = {{similar, dissimilar, 0.0, 0.0}};
  e.log_weight = {0.0};
  return e;
}

}  // namespace

TEST_CASE("ingestion filters records and references") {
  std::istringstream three(line("a", 2016, "Bio", {}) + line("b", 2017, "Bio", {"a", "zz"}) +
                           line("c", 2018, "Bio", {"a", "b", "q"}));
  const auto d = ingest(three, IngestOptions{});
  CHECK(d.size() == 3);
  CHECK(d.dropped_references == 2);
  CHECK(d.refs[2] == std::vector<std::uint32_t>{0, 1});

  std::istringstream window(line("a", 2014, "Bio", {}) + line("b", 2015, "Bio", {"a"}) +
                            line("c", 2020, "Bio", {}) + line("d", 2021, "Bio", {}) + "garbage\n");
  const auto w = ingest(window, IngestOptions{});
  CHECK(w.ids == std::vector<std::string>{"b", "c"});
  CHECK(w.out_of_window == 2);
  CHECK(w.malformed_lines == 1);
  CHECK(w.refs[0].empty());

  // "Rare" appears on 1 of 200 papers, below a 1% share.
  std::string many;
  for (int i = 0; i < 199; ++i) many += line("p" + std::to_string(i), 2016, i % 2 ? "Bio" : "Chem", {});
  many += "{\"id\":\"r\",\"year\":2016,\"fos\":[{\"name\":\"Rare\",\"w\":0.9},{\"name\":\"Bio\",\"w\":0.1}],"
          "\"references\":[]}\n";
  std::istringstream rare(many);
  IngestOptions opt;
  opt.min_field_share = 0.01;
  const auto r = ingest(rare, opt);
  CHECK(r.fields == std::vector<std::string>{"Bio", "Chem"});
  CHECK(r.size() == 200);
  CHECK(r.fields[r.field.back()] == "Bio");

  std::istringstream empty("");
  CHECK_THROWS_AS(ingest(empty, IngestOptions{}), Error);
}

TEST_CASE("spectral clustering") {
  // Two blocks with no cross weight.
  std::vector<std::vector<double>> w(4, std::vector<double>(4, 0.0));
  w[0][1] = w[1][0] = 5;
  w[2][3] = w[3][2] = 7;
  const auto two = spectral_clustering(w, std::nullopt, 1);
  CHECK(two.k == 2);
  CHECK(two.components == 2);
  CHECK(two.cluster == std::vector<std::uint32_t>{0, 0, 1, 1});

  // Planted partition: three blocks of 5 fields, dense inside, sparse across.
  const int n = 15;
  std::vector<std::uint32_t> truth(n);
  for (int i = 0; i < n; ++i) truth[i] = static_cast<std::uint32_t>((i * 7) % 3);
  Rng rng(2);
  std::vector<std::vector<double>> pw(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double base = truth[i] == truth[j] ? 20.0 : 1.0;
      pw[i][j] = pw[j][i] = base + static_cast<double>(rng.below(3));
    }
  }
  const auto three = spectral_clustering(pw, std::nullopt, 3);
  CHECK(three.k == 3);
  // Same partition up to relabelling: pairs agree on co-membership.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) CHECK((truth[i] == truth[j]) == (three.cluster[i] == three.cluster[j]));
  }

  const auto forced = spectral_clustering(pw, 2u, 3);
  CHECK(forced.k == 2);
  CHECK(std::set<std::uint32_t>(forced.cluster.begin(), forced.cluster.end()).size() == 2);
}

TEST_CASE("feasible assignments") {
  // v -> w -> x, the worked example: {1,1,1}, {1,2,1}, {1,2,2}.
  const Arcs chain{{0, 1}, {1, 2}};
  const auto gu = make_descendant_graph(0, {0, 1, 1}, chain);
  const auto set = enumerate_feasible_assignments(gu, 1);
  CHECK(set.exact);
  CHECK(set.assignments.size() == 3);

  CHECK(enumerate_feasible_assignments(make_descendant_graph(0, {0, 1, 0}, Arcs{}), 1).assignments.size() == 1);
  const Arcs one{{0, 1}};
  CHECK(enumerate_feasible_assignments(make_descendant_graph(0, {0, 1}, one), 1).assignments.size() == 2);

  Rng rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const auto n = static_cast<std::uint32_t>(1 + rng.below(12));
    std::vector<TypeId> types(n);
    for (auto& t : types) t = static_cast<TypeId>(rng.below(2));
    Arcs arcs;
    const double density = rng.uniform() * 0.4;
    for (std::uint32_t a = 0; a < n; ++a) {
      for (std::uint32_t b = 0; b < n; ++b) {
        if (a != b && rng.bernoulli(density)) arcs.emplace_back(a, b);
      }
    }
    const auto g = make_descendant_graph(0, types, arcs);
    auto got = enumerate_feasible_assignments(g, 1).assignments;
    auto want = oracle::feasible_by_filter(g);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    CHECK(got == want);
    for (const auto& phi : got) CHECK(is_feasible(g, phi));
  }
}

TEST_CASE("assignment statistics") {
  // Focal type 0; v similar, w and x dissimilar; v -> w -> x.
  const Arcs chain{{0, 1}, {1, 2}};
  const auto gu = make_descendant_graph(0, {0, 1, 1}, chain);
  const auto c = assignment_stats(gu, {1, 2, 1});
  CHECK(c == std::array<double, 4>{1, 1, 1, 0});
  CHECK(assignment_stats(gu, {1, 1, 1}) == std::array<double, 4>{1, 2, 0, 0});
  CHECK_THROWS_AS(assignment_stats(gu, {2, 1, 1}), Error);

  // w mediated by one similar and one dissimilar phase-1 reference.
  const Arcs fork{{0, 2}, {1, 2}};
  const auto split = make_descendant_graph(0, {0, 1, 1}, fork);
  CHECK(assignment_stats(split, {1, 1, 2}) == std::array<double, 4>{1, 1, 0.5, 0.5});
}

TEST_CASE("node likelihood") {
  const Theta th{2.0, 3.0, 0.5, 1.5};
  CHECK(node_log_likelihood(phase1_only(0, 0), th) == doctest::Approx(-std::log(2.0 * 3.0 * 0.5 * 1.5)));

  NodeEvidence two;
  two.counts = {{1, 2, 0, 0}, {1, 1, 1, 0}};
  two.log_weight = {std::log(0.5), std::log(0.5)};
  const double a = -1 / 2.0 - 2 / 3.0;
  const double b = -1 / 2.0 - 1 / 3.0 - 1 / 0.5;
  const double want = std::log(0.5 * std::exp(a) + 0.5 * std::exp(b)) - std::log(2.0 * 3.0 * 0.5 * 1.5);
  CHECK(node_log_likelihood(two, th) == doctest::Approx(want));

  auto bigger = two;
  for (auto& c : bigger.counts) {
    for (auto& x : c) x *= 2;
  }
  CHECK(node_log_likelihood(bigger, th) < node_log_likelihood(two, th));
  CHECK_THROWS_AS(node_log_likelihood(two, Theta{1, 1, 0, 1}), Error);
}

TEST_CASE("likelihood gradient equals the posterior-count identity") {
  const auto data = generate_synthetic(Theta{4, 2, 2, 1}, 2, 400, 3);
  std::vector<NodeId> nodes;
  for (NodeId u = data.first_arrival; u < data.graph.node_count(); ++u) nodes.push_back(u);
  const auto ev = collect_evidence(data.graph, nodes, 1);
  const Theta at{3.0, 1.5, 1.0, 0.7};
  std::array<double, 4> grad{};
  oracle::posterior_mean_counts(ev, at, &grad);
  for (int i = 0; i < 4; ++i) {
    auto hi = at.as_array(), lo = at.as_array();
    const double h = 1e-5 * hi[i];
    hi[i] += h;
    lo[i] -= h;
    const double fd = (total_log_likelihood(ev, Theta::from_array(hi)) - total_log_likelihood(ev, Theta::from_array(lo))) / (2 * h);
    CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("fit without phase-2 evidence") {
  std::vector<NodeEvidence> ev;
  Rng rng(6);
  double ms = 0, md = 0;
  for (int i = 0; i < 200; ++i) {
    const double s = 1.0 + static_cast<double>(rng.below(6));
    const double d = static_cast<double>(rng.below(4));
    ms += s / 200;
    md += d / 200;
    ev.push_back(phase1_only(s, d));
  }
  FitOptions opt;
  opt.starts = 4;
  const auto fit = fit_theta(ev, opt);
  // With one assignment per node the stationarity condition is
  // theta = mean counts for the phase-1 components.
  CHECK(fit.theta.n_s == doctest::Approx(ms).epsilon(1e-5));
  CHECK(fit.theta.n_d == doctest::Approx(md).epsilon(1e-5));
  CHECK(fit.at_bound[2]);
  CHECK(fit.at_bound[3]);
  CHECK_FALSE(fit.at_bound[0]);

  auto shuffled = ev;
  std::reverse(shuffled.begin(), shuffled.end());
  std::swap(shuffled[3], shuffled[150]);
  const auto again = fit_theta(shuffled, opt);
  for (int i = 0; i < 4; ++i) CHECK(again.theta.as_array()[i] == doctest::Approx(fit.theta.as_array()[i]).epsilon(1e-8));

  std::vector<NodeEvidence> few(ev.begin(), ev.begin() + 10);
  CHECK_THROWS_AS(fit_theta(few, opt), Error);
}

TEST_CASE("equilibrium prediction") {
  const auto p = predict_equilibrium(Theta{6, 2, 3, 1}, 2);
  CHECK(p.alpha == doctest::Approx(0.75));
  CHECK(p.f_inf == doctest::Approx(0.3));
  CHECK(p.f_inf_no_tc == doctest::Approx(0.25));
  CHECK(p.tc_contribution == doctest::Approx(0.05));
  CHECK(p.alpha_valid);

  const auto none = predict_equilibrium(Theta{6, 2, 0, 0}, 2);
  CHECK(none.tc_contribution == 0.0);
}

TEST_CASE("synthetic generator reaches the predicted integration") {
  const Theta th{6, 2, 3, 1};
  const auto data = generate_synthetic(th, 2, 3000, 4);
  CHECK(std::abs(data.observed_integration - predict_equilibrium(th, 2).f_inf) < 0.03);
}

TEST_CASE("pipeline on a small citation file") {
  EstimateOptions opt;
  opt.fit.starts = 2;
  const auto data = ingest(std::string(NETSEG_TEST_DATA_DIR) + "/citations_small.jsonl", opt.ingest);
  CHECK(data.malformed_lines == 1);
  const auto report = estimate(data, opt);
  CHECK(report.clustering.k == 2);
  REQUIRE(report.clusters.size() == 2);
  for (const auto& c : report.clusters) {
    CHECK(c.fields.size() == 2);
    CHECK(c.nodes > 0);
  }
}
