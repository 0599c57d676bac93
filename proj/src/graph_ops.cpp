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

#include "netseg/graph_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netseg/errors.hpp"

namespace netseg {
namespace {

// Attempts per draw before a rejection sampler falls back to enumeration.
// Every attempt is uniform over its target set given acceptance, and so is
// the fallback, so the mixture stays uniform.
constexpr int kRejectionTries = 64;

std::uint64_t choose2(std::uint64_t d) { return d < 2 ? 0 : d * (d - 1) / 2; }

// Calls fn(h, i, j) for every triangle corner h closing the linked pair i < j.
template <typename Fn>
void for_each_closed_pair(const TypedGraph& g, Fn&& fn) {
  const auto n = static_cast<NodeId>(g.node_count());
  for (NodeId i = 0; i < n; ++i) {
    const auto ni = g.neighbors(i);
    for (NodeId j : ni) {
      if (j <= i) continue;
      const auto nj = g.neighbors(j);
      auto a = ni.begin();
      auto b = nj.begin();
      while (a != ni.end() && b != nj.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          fn(*a, i, j);
          ++a;
          ++b;
        }
      }
    }
  }
}

// Picks index k with probability weights[k] / total given the prefix sums.
std::size_t pick_prefix(const std::vector<std::uint64_t>& prefix, Rng& rng) {
  const std::uint64_t r = rng.below(prefix.back());
  return static_cast<std::size_t>(
      std::upper_bound(prefix.begin(), prefix.end(), r) - prefix.begin());
}

Wedge make_wedge(const TypedGraph& g, NodeId a, NodeId h, NodeId b) {
  Wedge w;
  w.i = std::min(a, b);
  w.j = std::max(a, b);
  w.h = h;
  w.mono = g.type(a) == g.type(b);
  return w;
}

Wedge sample_wedge_exact(const TypedGraph& g, Rng& rng) {
  const auto n = g.node_count();
  std::vector<std::uint64_t> closed(n, 0);
  for_each_closed_pair(g, [&](NodeId h, NodeId, NodeId) { ++closed[h]; });
  std::vector<std::uint64_t> prefix(n);
  std::uint64_t total = 0;
  for (NodeId h = 0; h < n; ++h) {
    total += choose2(g.degree(h)) - closed[h];
    prefix[h] = total;
  }
  if (total == 0) throw Error(ErrorCode::kNoWedge, "graph has no open two-path");
  const auto h = static_cast<NodeId>(pick_prefix(prefix, rng));
  std::uint64_t target = rng.below(choose2(g.degree(h)) - closed[h]);
  const auto nh = g.neighbors(h);
  for (std::size_t a = 0; a < nh.size(); ++a) {
    for (std::size_t b = a + 1; b < nh.size(); ++b) {
      if (g.adjacent(nh[a], nh[b])) continue;
      if (target-- == 0) return make_wedge(g, nh[a], h, nh[b]);
    }
  }
  throw Error(ErrorCode::kNoWedge, "wedge enumeration out of sync");
}

struct MissingCounts {
  std::uint64_t mono = 0;
  std::uint64_t bi = 0;
};

MissingCounts missing_pairs(const TypedGraph& g,
                            const std::vector<std::vector<NodeId>>& groups) {
  std::uint64_t mono_pairs = 0;
  for (const auto& grp : groups) mono_pairs += choose2(grp.size());
  const std::uint64_t bi_pairs = choose2(g.node_count()) - mono_pairs;
  std::uint64_t mono_linked = 0, bi_linked = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (v <= u) continue;
      (g.type(u) == g.type(v) ? mono_linked : bi_linked) += 1;
    }
  }
  return {mono_pairs - mono_linked, bi_pairs - bi_linked};
}

std::pair<NodeId, NodeId> draw_missing_mono(const TypedGraph& g,
                                            const std::vector<std::vector<NodeId>>& groups,
                                            std::uint64_t missing, Rng& rng) {
  std::vector<std::uint64_t> prefix(groups.size());
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    total += choose2(groups[k].size());
    prefix[k] = total;
  }
  for (int attempt = 0; attempt < kRejectionTries; ++attempt) {
    const auto& grp = groups[pick_prefix(prefix, rng)];
    const auto a = rng.below(grp.size());
    auto b = rng.below(grp.size() - 1);
    if (b >= a) ++b;
    if (!g.adjacent(grp[a], grp[b])) return {grp[a], grp[b]};
  }
  std::uint64_t target = rng.below(missing);
  for (const auto& grp : groups) {
    for (std::size_t a = 0; a < grp.size(); ++a) {
      for (std::size_t b = a + 1; b < grp.size(); ++b) {
        if (g.adjacent(grp[a], grp[b])) continue;
        if (target-- == 0) return {grp[a], grp[b]};
      }
    }
  }
  throw Error(ErrorCode::kNoMissingEdge, "missing-pair enumeration out of sync");
}

std::pair<NodeId, NodeId> draw_missing_bi(const TypedGraph& g, std::uint64_t missing,
                                          Rng& rng) {
  const auto n = static_cast<NodeId>(g.node_count());
  for (int attempt = 0; attempt < kRejectionTries; ++attempt) {
    const auto a = static_cast<NodeId>(rng.below(n));
    const auto b = static_cast<NodeId>(rng.below(n));
    if (g.type(a) != g.type(b) && !g.adjacent(a, b)) return {a, b};
  }
  std::uint64_t target = rng.below(missing);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (g.type(a) == g.type(b) || g.adjacent(a, b)) continue;
      if (target-- == 0) return {a, b};
    }
  }
  throw Error(ErrorCode::kNoMissingEdge, "missing-pair enumeration out of sync");
}

}  // namespace

EdgeStats integration(const TypedGraph& g) {
  EdgeStats s;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (v <= u) continue;
      (g.type(u) == g.type(v) ? s.mono_edges : s.bi_edges) += 1;
    }
  }
  const auto total = s.mono_edges + s.bi_edges;
  if (total == 0) throw Error(ErrorCode::kUndefinedIntegration, "graph has no edges");
  s.integration = static_cast<double>(s.bi_edges) / static_cast<double>(total);
  return s;
}

WedgeStats count_wedges(const TypedGraph& g) {
  WedgeStats s;
  std::vector<std::uint64_t> per_type(g.num_types(), 0);
  for (NodeId h = 0; h < g.node_count(); ++h) {
    const auto nh = g.neighbors(h);
    if (nh.size() < 2) continue;
    std::fill(per_type.begin(), per_type.end(), 0);
    for (NodeId v : nh) ++per_type[g.type(v)];
    std::uint64_t mono = 0;
    for (auto c : per_type) mono += choose2(c);
    s.mono_wedges += mono;
    s.bi_wedges += choose2(nh.size()) - mono;
  }
  for_each_closed_pair(g, [&](NodeId, NodeId i, NodeId j) {
    (g.type(i) == g.type(j) ? s.mono_wedges : s.bi_wedges) -= 1;
  });
  return s;
}

Wedge sample_wedge(const TypedGraph& g, Rng& rng) {
  const auto n = g.node_count();
  std::vector<std::uint64_t> prefix(n);
  std::uint64_t total = 0;
  for (NodeId h = 0; h < n; ++h) {
    total += choose2(g.degree(h));
    prefix[h] = total;
  }
  if (total == 0) throw Error(ErrorCode::kNoWedge, "graph has no two-path");
  for (int attempt = 0; attempt < kRejectionTries; ++attempt) {
    const auto h = static_cast<NodeId>(pick_prefix(prefix, rng));
    const auto nh = g.neighbors(h);
    const auto a = rng.below(nh.size());
    auto b = rng.below(nh.size() - 1);
    if (b >= a) ++b;
    if (!g.adjacent(nh[a], nh[b])) return make_wedge(g, nh[a], h, nh[b]);
  }
  return sample_wedge_exact(g, rng);
}

Wedge close_random_wedge(TypedGraph& g, Rng& rng) {
  const Wedge w = sample_wedge(g, rng);
  g.add_edge(w.i, w.j);
  return w;
}

AddedEdge add_random_edge(TypedGraph& g, double gamma, Rng& rng) {
  if (!(gamma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "gamma must be >= 0");
  const auto groups = g.nodes_by_type();
  const auto missing = missing_pairs(g, groups);
  if (missing.mono + missing.bi == 0) {
    throw Error(ErrorCode::kNoMissingEdge, "graph is complete");
  }
  bool mono;
  if (std::isinf(gamma)) {
    mono = missing.mono > 0;
  } else {
    const double wm = gamma * static_cast<double>(missing.mono);
    const double wb = static_cast<double>(missing.bi);
    if (wm + wb <= 0.0) {
      throw Error(ErrorCode::kNoMissingEdge, "no missing pair has positive weight");
    }
    mono = rng.uniform() * (wm + wb) < wm;
  }
  const auto [u, v] = mono ? draw_missing_mono(g, groups, missing.mono, rng)
                           : draw_missing_bi(g, missing.bi, rng);
  g.add_edge(u, v);
  return {u, v, mono};
}

TypedGraph random_typed_graph(const std::vector<std::uint32_t>& group_sizes,
                              std::uint64_t edge_count, std::uint64_t seed) {
  std::vector<TypeId> types;
  for (std::size_t k = 0; k < group_sizes.size(); ++k) {
    types.insert(types.end(), group_sizes[k], static_cast<TypeId>(k));
  }
  const auto n = static_cast<NodeId>(types.size());
  const std::uint64_t pairs = choose2(n);
  if (edge_count > pairs) {
    throw Error(ErrorCode::kInvalidArgument, "more edges requested than node pairs");
  }
  TypedGraph g(std::move(types), static_cast<TypeId>(std::max<std::size_t>(1, group_sizes.size())),
               false);
  Rng rng(seed);
  if (2 * edge_count <= pairs) {
    while (g.edge_count() < edge_count) {
      const auto a = static_cast<NodeId>(rng.below(n));
      const auto b = static_cast<NodeId>(rng.below(n));
      if (a != b) g.add_edge(a, b);
    }
    return g;
  }
  std::vector<std::pair<NodeId, NodeId>> all;
  all.reserve(pairs);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) all.emplace_back(a, b);
  }
  for (std::uint64_t k = 0; k < edge_count; ++k) {
    std::swap(all[k], all[k + rng.below(pairs - k)]);
    g.add_edge(all[k].first, all[k].second);
  }
  return g;
}

}  // namespace netseg
