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

#ifndef NETSEG_GRAPH_OPS_HPP_
#define NETSEG_GRAPH_OPS_HPP_

#include <cstdint>
#include <vector>

#include "netseg/graph.hpp"
#include "netseg/rng.hpp"

namespace netseg {

struct EdgeStats {
  std::uint64_t mono_edges = 0;
  std::uint64_t bi_edges = 0;
  double integration = 0.0;  // bi / (mono + bi)
};

struct WedgeStats {
  std::uint64_t mono_wedges = 0;
  std::uint64_t bi_wedges = 0;
  std::uint64_t total() const noexcept { return mono_wedges + bi_wedges; }
};

// Open two-path i - h - j with i and j unlinked; i < j.
struct Wedge {
  NodeId i = 0;
  NodeId h = 0;
  NodeId j = 0;
  bool mono = false;
};

struct AddedEdge {
  NodeId u = 0;
  NodeId v = 0;
  bool mono = false;
};

// Fraction of bichromatic links. Throws kUndefinedIntegration on an empty graph.
EdgeStats integration(const TypedGraph& g);

// Counts wedges per mediator: a pair with two common neighbours counts twice.
WedgeStats count_wedges(const TypedGraph& g);

// Uniform draw over all wedges (i, h, j). Throws kNoWedge if there is none.
Wedge sample_wedge(const TypedGraph& g, Rng& rng);

// Draws a uniform wedge and links its endpoints.
Wedge close_random_wedge(TypedGraph& g, Rng& rng);

// Links a missing pair chosen with weight gamma if monochromatic and 1
// otherwise. gamma may be +infinity (monochromatic whenever possible).
// Throws kNoMissingEdge on a complete graph.
AddedEdge add_random_edge(TypedGraph& g, double gamma, Rng& rng);

// Undirected graph with exactly `edge_count` uniformly chosen edges; group k
// occupies a contiguous id range and has type k.
TypedGraph random_typed_graph(const std::vector<std::uint32_t>& group_sizes,
                              std::uint64_t edge_count, std::uint64_t seed);

}  // namespace netseg

#endif  // NETSEG_GRAPH_OPS_HPP_
