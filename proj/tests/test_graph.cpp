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
#include <map>
#include <sstream>
#include <tuple>
#include <utility>
#include <vector>

#include "doctest.h"
#include "netseg/errors.hpp"
#include "netseg/graph.hpp"
#include "netseg/graph_io.hpp"
#include "netseg/graph_ops.hpp"
#include "netseg/rng.hpp"
#include "netseg/sbm.hpp"
#include "netseg/stats.hpp"
#include "oracles.hpp"

using namespace netseg;

namespace {

TypedGraph path_001() {
  const std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {1, 2}};
  return TypedGraph::from_pairs({0, 0, 1}, 2, false, e);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected netseg::Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("graph container basics") {
  TypedGraph g({0, 1, 0}, 2, false);
  CHECK(g.add_edge(0, 1));
  CHECK_FALSE(g.add_edge(1, 0));
  CHECK(g.has_edge(1, 0));
  CHECK(g.edge_count() == 1);
  CHECK(code_of([&] { g.add_edge(2, 2); }) == ErrorCode::kInvalidArgument);
  CHECK(g.remove_edge(0, 1));
  CHECK(g.edge_count() == 0);

  TypedGraph d({0, 1}, 2, true);
  d.add_edge(0, 1);
  CHECK(d.has_edge(0, 1));
  CHECK_FALSE(d.has_edge(1, 0));
  CHECK(d.adjacent(1, 0));
  CHECK(d.add_edge(1, 0));
  CHECK(d.edge_count() == 2);
  CHECK(d.pair_count() == 1);
}

TEST_CASE("integration on small graphs") {
  const std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {0, 2}};
  CHECK(integration(TypedGraph::from_pairs({0, 0, 1}, 2, false, e)).integration == doctest::Approx(0.5));

  const std::vector<std::pair<NodeId, NodeId>> k4{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  CHECK(integration(TypedGraph::from_pairs({0, 0, 0, 0}, 1, false, k4)).integration == 0.0);

  CHECK(code_of([] { integration(TypedGraph({0, 1}, 2, false)); }) == ErrorCode::kUndefinedIntegration);
}

TEST_CASE("integration matches a per-pair tally on random graphs") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = random_typed_graph({12, 8}, 40, seed);
    const auto s = integration(g);
    const auto t = oracle::edge_tally(g);
    CHECK(s.mono_edges == t.mono);
    CHECK(s.bi_edges == t.bi);
  }
}

TEST_CASE("wedge counts") {
  const std::vector<std::pair<NodeId, NodeId>> tri{{0, 1}, {1, 2}, {0, 2}};
  CHECK(count_wedges(TypedGraph::from_pairs({0, 0, 1}, 2, false, tri)).total() == 0);

  const std::vector<std::pair<NodeId, NodeId>> star{{0, 1}, {0, 2}, {0, 3}};
  const auto s = count_wedges(TypedGraph::from_pairs({0, 0, 0, 0}, 1, false, star));
  CHECK(s.mono_wedges == 3);
  CHECK(s.bi_wedges == 0);

  const auto p = count_wedges(path_001());
  CHECK(p.mono_wedges == 0);
  CHECK(p.bi_wedges == 1);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = random_typed_graph({10, 10, 5}, 60, seed);
    const auto w = count_wedges(g);
    const auto t = oracle::wedge_tally(g);
    CHECK(w.mono_wedges == t.mono);
    CHECK(w.bi_wedges == t.bi);
  }
}

TEST_CASE("closing the only wedge of a path") {
  auto g = path_001();
  Rng rng(3);
  const auto w = close_random_wedge(g, rng);
  CHECK(((w.i == 0 && w.j == 2) || (w.i == 2 && w.j == 0)));
  CHECK(g.has_edge(0, 2));
  CHECK(integration(g).integration == doctest::Approx(2.0 / 3.0));

  const std::vector<std::pair<NodeId, NodeId>> c4{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  auto cyc = TypedGraph::from_pairs({0, 1, 0, 1}, 2, false, c4);
  close_random_wedge(cyc, rng);
  CHECK(cyc.edge_count() == 5);

  const std::vector<std::pair<NodeId, NodeId>> tri{{0, 1}, {1, 2}, {0, 2}};
  auto closed = TypedGraph::from_pairs({0, 0, 1}, 2, false, tri);
  CHECK(code_of([&] { sample_wedge(closed, rng); }) == ErrorCode::kNoWedge);
}

TEST_CASE("wedge sampling is uniform over enumerated wedges") {
  const auto g = sample_sbm(SbmParams{{100, 100}, 0.03, 0.01}, 5);
  std::map<std::tuple<NodeId, NodeId, NodeId>, int> hits;
  std::size_t wedges = count_wedges(g).total();
  REQUIRE(wedges > 50);
  const int draws = 200 * static_cast<int>(wedges) / 10;
  Rng rng(17);
  for (int d = 0; d < draws; ++d) {
    const auto w = sample_wedge(g, rng);
    hits[{std::min(w.i, w.j), w.h, std::max(w.i, w.j)}] += 1;
  }
  CHECK(hits.size() <= wedges);
  // Pearson chi-square against the uniform law, compared with the mean plus
  // 3 standard deviations of the chi-square distribution.
  const double expected = static_cast<double>(draws) / static_cast<double>(wedges);
  double chi2 = static_cast<double>(wedges - hits.size()) * expected;
  for (const auto& [key, count] : hits) chi2 += (count - expected) * (count - expected) / expected;
  const double dof = static_cast<double>(wedges - 1);
  CHECK(chi2 < dof + 3.0 * std::sqrt(2.0 * dof));
}

TEST_CASE("gamma-homophilous edge selection") {
  SUBCASE("gamma 2 with one mono and one bi missing pair") {
    const std::vector<std::pair<NodeId, NodeId>> e{{0, 1}};
    // Nodes 0,1,2 with types 0,1,0: missing pairs (0,2) mono and (1,2) bi.
    int mono = 0;
    const int draws = 30000;
    Rng rng(9);
    for (int d = 0; d < draws; ++d) {
      auto g = TypedGraph::from_pairs({0, 1, 0}, 2, false, e);
      mono += add_random_edge(g, 2.0, rng).mono;
    }
    const double p = 2.0 / 3.0;
    CHECK(std::abs(mono / double(draws) - p) < 4.0 * std::sqrt(p * (1 - p) / draws));
  }
  SUBCASE("gamma 1 is uniform over missing pairs") {
    // Types 0,0,1,1 and edges 0-2, 1-3: missing pairs 0-1, 2-3 (mono) and 0-3, 1-2 (bi).
    const std::vector<std::pair<NodeId, NodeId>> e{{0, 2}, {1, 3}};
    std::map<std::pair<NodeId, NodeId>, int> hits;
    const int draws = 40000;
    Rng rng(10);
    for (int d = 0; d < draws; ++d) {
      auto g = TypedGraph::from_pairs({0, 0, 1, 1}, 2, false, e);
      const auto a = add_random_edge(g, 1.0, rng);
      hits[{std::min(a.u, a.v), std::max(a.u, a.v)}] += 1;
    }
    CHECK(hits.size() == 4);
    for (const auto& [pair, c] : hits) CHECK(std::abs(c / double(draws) - 0.25) < 4.0 * std::sqrt(0.1875 / draws));
  }
  SUBCASE("infinite gamma picks a mono pair whenever one exists") {
    const std::vector<std::pair<NodeId, NodeId>> e{{0, 2}, {1, 3}};
    Rng rng(11);
    for (int d = 0; d < 200; ++d) {
      auto g = TypedGraph::from_pairs({0, 0, 1, 1}, 2, false, e);
      CHECK(add_random_edge(g, INFINITY, rng).mono);
    }
  }
  SUBCASE("complete graph") {
    const std::vector<std::pair<NodeId, NodeId>> e{{0, 1}};
    auto g = TypedGraph::from_pairs({0, 1}, 2, false, e);
    Rng rng(1);
    CHECK(code_of([&] { add_random_edge(g, 1.0, rng); }) == ErrorCode::kNoMissingEdge);
  }
}

TEST_CASE("edge list and JSON round trips") {
  const auto g = random_typed_graph({5, 4}, 12, 3);
  std::stringstream text;
  write_edge_list(g, text);
  const auto back = read_edge_list(text);
  CHECK(back.edges() == g.edges());
  CHECK(back.types() == g.types());

  const auto j = graph_to_json(g);
  const auto again = graph_from_json(j);
  CHECK(again.edges() == g.edges());
  CHECK(again.num_types() == 2);

  std::istringstream bad("undirected K=2\nnode 0 0\nedge 0 5\n");
  CHECK(code_of([&] { read_edge_list(bad); }) == ErrorCode::kParse);
}

TEST_CASE("rng streams are reproducible and split independently") {
  Rng a(42, 3);
  Rng b(42, 3);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  Rng c(42, 3);
  c();
  CHECK(c.split(5).key() == Rng(42, 3).split(5).key());
  CHECK(Rng(42, 3).split(5).key() != Rng(42, 3).split(6).key());

  Rng r(1);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(r.round_stochastic(2.3));
  CHECK(sum / n == doctest::Approx(2.3).epsilon(0.01));
  std::array<int, 7> bins{};
  for (int i = 0; i < 70000; ++i) bins[r.below(7)] += 1;
  for (int b : bins) CHECK(std::abs(b - 10000) < 500);
}

TEST_CASE("summary statistics and least squares") {
  const std::vector<double> v{1, 2, 3, 4};
  const auto s = summarize(v);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.variance == doctest::Approx(5.0 / 3.0));
  CHECK(s.sem == doctest::Approx(std::sqrt(5.0 / 12.0)));
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const auto f = ols(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
}
