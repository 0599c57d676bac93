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

#include "netseg/graph.hpp"

#include <algorithm>
#include <string>

#include "netseg/errors.hpp"

namespace netseg {
namespace {

bool sorted_contains(const std::vector<NodeId>& list, NodeId v) {
  return std::binary_search(list.begin(), list.end(), v);
}

bool sorted_insert(std::vector<NodeId>& list, NodeId v) {
  auto it = std::lower_bound(list.begin(), list.end(), v);
  if (it != list.end() && *it == v) return false;
  list.insert(it, v);
  return true;
}

bool sorted_erase(std::vector<NodeId>& list, NodeId v) {
  auto it = std::lower_bound(list.begin(), list.end(), v);
  if (it == list.end() || *it != v) return false;
  list.erase(it);
  return true;
}

}  // namespace

TypedGraph::TypedGraph(std::vector<TypeId> node_types, TypeId num_types, bool directed)
    : types_(std::move(node_types)), num_types_(num_types), directed_(directed) {
  if (num_types_ < 1) throw Error(ErrorCode::kInvalidArgument, "graph needs K >= 1");
  for (TypeId t : types_) {
    if (t >= num_types_) {
      throw Error(ErrorCode::kInvalidArgument,
                  "node type " + std::to_string(t) + " outside [0, K)");
    }
  }
  nbr_.resize(types_.size());
  if (directed_) {
    out_.resize(types_.size());
    in_.resize(types_.size());
  }
}

TypedGraph TypedGraph::from_pairs(std::vector<TypeId> node_types, TypeId num_types,
                                  bool directed,
                                  std::span<const std::pair<NodeId, NodeId>> pairs) {
  TypedGraph g(std::move(node_types), num_types, directed);
  for (const auto& [u, v] : pairs) {
    if (!g.add_edge(u, v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    }
  }
  return g;
}

NodeId TypedGraph::add_node(TypeId type) {
  if (type >= num_types_) throw Error(ErrorCode::kInvalidArgument, "node type outside [0, K)");
  types_.push_back(type);
  nbr_.emplace_back();
  if (directed_) {
    out_.emplace_back();
    in_.emplace_back();
  }
  return static_cast<NodeId>(types_.size() - 1);
}

void TypedGraph::check_node(NodeId v) const {
  if (v >= types_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "node id " + std::to_string(v) + " out of range");
  }
}

bool TypedGraph::add_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) throw Error(ErrorCode::kInvalidArgument, "self-loop at node " + std::to_string(u));
  if (directed_) {
    if (!sorted_insert(out_[u], v)) return false;
    sorted_insert(in_[v], u);
    ++edge_count_;
    if (sorted_insert(nbr_[u], v)) {
      sorted_insert(nbr_[v], u);
      ++pair_count_;
    }
    return true;
  }
  if (!sorted_insert(nbr_[u], v)) return false;
  sorted_insert(nbr_[v], u);
  ++edge_count_;
  ++pair_count_;
  return true;
}

bool TypedGraph::remove_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (directed_) {
    if (!sorted_erase(out_[u], v)) return false;
    sorted_erase(in_[v], u);
    --edge_count_;
    if (!sorted_contains(out_[v], u)) {
      sorted_erase(nbr_[u], v);
      sorted_erase(nbr_[v], u);
      --pair_count_;
    }
    return true;
  }
  if (!sorted_erase(nbr_[u], v)) return false;
  sorted_erase(nbr_[v], u);
  --edge_count_;
  --pair_count_;
  return true;
}

bool TypedGraph::has_edge(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  return directed_ ? sorted_contains(out_[u], v) : sorted_contains(nbr_[u], v);
}

bool TypedGraph::adjacent(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  const auto& a = nbr_[u].size() <= nbr_[v].size() ? nbr_[u] : nbr_[v];
  return sorted_contains(a, &a == &nbr_[u] ? v : u);
}

std::span<const NodeId> TypedGraph::out_neighbors(NodeId v) const {
  return directed_ ? std::span<const NodeId>(out_[v]) : std::span<const NodeId>(nbr_[v]);
}

std::span<const NodeId> TypedGraph::in_neighbors(NodeId v) const {
  return directed_ ? std::span<const NodeId>(in_[v]) : std::span<const NodeId>(nbr_[v]);
}

std::vector<std::pair<NodeId, NodeId>> TypedGraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> result;
  result.reserve(edge_count_);
  for (NodeId u = 0; u < types_.size(); ++u) {
    if (directed_) {
      for (NodeId v : out_[u]) result.emplace_back(u, v);
    } else {
      for (NodeId v : nbr_[u]) {
        if (u < v) result.emplace_back(u, v);
      }
    }
  }
  return result;
}

std::vector<std::vector<NodeId>> TypedGraph::nodes_by_type() const {
  std::vector<std::vector<NodeId>> groups(num_types_);
  for (NodeId v = 0; v < types_.size(); ++v) groups[types_[v]].push_back(v);
  return groups;
}

}  // namespace netseg
