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

#ifndef NETSEG_GRAPH_HPP_
#define NETSEG_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace netseg {

using NodeId = std::uint32_t;
using TypeId = std::uint32_t;

// Simple node-typed graph, directed or undirected. Adjacency lists are kept
// sorted so membership tests are binary searches and iteration order is
// deterministic.
//
// For directed graphs the class also maintains the underlying undirected
// simple graph (`neighbors`, `adjacent`, `degree`); integration and wedge
// statistics are defined on that structure.
class TypedGraph {
 public:
  TypedGraph() = default;
  TypedGraph(std::vector<TypeId> node_types, TypeId num_types, bool directed);

  // Builds a graph from a pair list. Duplicate pairs and self-loops are errors.
  static TypedGraph from_pairs(std::vector<TypeId> node_types, TypeId num_types,
                               bool directed,
                               std::span<const std::pair<NodeId, NodeId>> pairs);

  std::size_t node_count() const noexcept { return types_.size(); }
  TypeId num_types() const noexcept { return num_types_; }
  bool directed() const noexcept { return directed_; }
  TypeId type(NodeId v) const { return types_[v]; }
  const std::vector<TypeId>& types() const noexcept { return types_; }

  NodeId add_node(TypeId type);

  // Returns false (and leaves the graph untouched) if the edge already exists.
  // Self-loops and out-of-range ids throw.
  bool add_edge(NodeId u, NodeId v);
  bool remove_edge(NodeId u, NodeId v);

  // Arc u->v for directed graphs, edge {u,v} otherwise.
  bool has_edge(NodeId u, NodeId v) const;
  // Linked in either direction.
  bool adjacent(NodeId u, NodeId v) const;

  std::span<const NodeId> neighbors(NodeId v) const { return nbr_[v]; }
  std::span<const NodeId> out_neighbors(NodeId v) const;
  std::span<const NodeId> in_neighbors(NodeId v) const;
  std::size_t degree(NodeId v) const { return nbr_[v].size(); }

  // Arcs for directed graphs, edges otherwise.
  std::size_t edge_count() const noexcept { return edge_count_; }
  // Number of linked unordered pairs in the underlying undirected graph.
  std::size_t pair_count() const noexcept { return pair_count_; }

  // (u, v) with u < v for undirected graphs; arcs in source order otherwise.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  // Node ids grouped by type.
  std::vector<std::vector<NodeId>> nodes_by_type() const;

 private:
  void check_node(NodeId v) const;

  std::vector<TypeId> types_;
  TypeId num_types_ = 1;
  bool directed_ = false;
  std::vector<std::vector<NodeId>> nbr_;
  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::size_t edge_count_ = 0;
  std::size_t pair_count_ = 0;
};

}  // namespace netseg

#endif  // NETSEG_GRAPH_HPP_
