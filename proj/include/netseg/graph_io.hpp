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

#ifndef NETSEG_GRAPH_IO_HPP_
#define NETSEG_GRAPH_IO_HPP_

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "netseg/graph.hpp"

namespace netseg {

// Text edge list:
//
//   undirected K=2
//   node 0 0
//   node 1 1
//   edge 0 1
//
// Node ids must cover 0..n-1 (any order); blank lines and lines starting
// with '#' are ignored.
TypedGraph read_edge_list(std::istream& in);
void write_edge_list(const TypedGraph& g, std::ostream& out);

// {"directed": false, "K": 2, "nodes": [{"id": 0, "type": 0}, ...],
//  "edges": [[0, 1], ...]}
TypedGraph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const TypedGraph& g);

// Chooses the format from the extension (".json" or anything else = text).
TypedGraph load_graph(const std::string& path);
void save_graph(const TypedGraph& g, const std::string& path);

}  // namespace netseg

#endif  // NETSEG_GRAPH_IO_HPP_
