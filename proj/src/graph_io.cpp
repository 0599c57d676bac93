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

#include "netseg/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "netseg/errors.hpp"

namespace netseg {
namespace {

constexpr std::uint32_t kUnset = 0xffffffffu;

TypedGraph assemble(bool directed, TypeId k, const std::vector<std::uint32_t>& types,
                    const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<TypeId> node_types(types.size());
  for (std::size_t v = 0; v < types.size(); ++v) {
    if (types[v] == kUnset) {
      throw Error(ErrorCode::kParse, "node ids must cover 0..n-1; missing " + std::to_string(v));
    }
    node_types[v] = types[v];
  }
  try {
    return TypedGraph::from_pairs(std::move(node_types), k, directed, edges);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

void place(std::vector<std::uint32_t>& types, std::uint64_t id, std::uint64_t type) {
  if (id >= (1u << 31)) throw Error(ErrorCode::kParse, "node id too large");
  if (types.size() <= id) types.resize(id + 1, kUnset);
  if (types[id] != kUnset) throw Error(ErrorCode::kParse, "node " + std::to_string(id) + " declared twice");
  types[id] = static_cast<std::uint32_t>(type);
}

}  // namespace

TypedGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool directed = false;
  TypeId k = 0;
  std::vector<std::uint32_t> types;
  std::vector<std::pair<NodeId, NodeId>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word.empty()) continue;
    const auto fail = [&](const std::string& what) {
      return Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
    };
    if (!have_header) {
      if (word != "directed" && word != "undirected") throw fail("expected directed|undirected header");
      directed = word == "directed";
      std::string kfield;
      ls >> kfield;
      if (kfield.rfind("K=", 0) != 0) throw fail("expected K=<int>");
      try {
        k = static_cast<TypeId>(std::stoul(kfield.substr(2)));
      } catch (const std::exception&) {
        throw fail("bad K value");
      }
      have_header = true;
      continue;
    }
    std::uint64_t a = 0, b = 0;
    if (!(ls >> a >> b)) throw fail("expected two integers");
    if (word == "node") {
      place(types, a, b);
    } else if (word == "edge") {
      edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    } else {
      throw fail("unknown record '" + word + "'");
    }
  }
  if (!have_header) throw Error(ErrorCode::kParse, "missing header line");
  return assemble(directed, k, types, edges);
}

void write_edge_list(const TypedGraph& g, std::ostream& out) {
  out << (g.directed() ? "directed" : "undirected") << " K=" << g.num_types() << '\n';
  for (NodeId v = 0; v < g.node_count(); ++v) out << "node " << v << ' ' << g.type(v) << '\n';
  for (const auto& [u, v] : g.edges()) out << "edge " << u << ' ' << v << '\n';
}

TypedGraph graph_from_json(const nlohmann::json& j) {
  try {
    const bool directed = j.at("directed").get<bool>();
    const auto k = j.at("K").get<TypeId>();
    std::vector<std::uint32_t> types;
    for (const auto& node : j.at("nodes")) {
      place(types, node.at("id").get<std::uint64_t>(), node.at("type").get<std::uint64_t>());
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (const auto& e : j.at("edges")) {
      edges.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
    }
    return assemble(directed, k, types, edges);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

nlohmann::json graph_to_json(const TypedGraph& g) {
  nlohmann::json j;
  j["directed"] = g.directed();
  j["K"] = g.num_types();
  auto nodes = nlohmann::json::array();
  for (NodeId v = 0; v < g.node_count(); ++v) nodes.push_back({{"id", v}, {"type", g.type(v)}});
  j["nodes"] = std::move(nodes);
  auto edges = nlohmann::json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  return j;
}

namespace {
bool is_json_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}
}  // namespace

TypedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path);
  if (is_json_path(path)) {
    try {
      return graph_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, e.what());
    }
  }
  return read_edge_list(in);
}

void save_graph(const TypedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  if (is_json_path(path)) {
    out << graph_to_json(g).dump(1) << '\n';
  } else {
    write_edge_list(g, out);
  }
}

}  // namespace netseg
