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

#ifndef NETSEG_ESTIMATION_HPP_
#define NETSEG_ESTIMATION_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netseg/graph.hpp"

namespace netseg {

// ----------------------------------------------------------------------------
// Citation data

struct FieldWeight {
  std::string name;
  double weight = 0.0;
};

struct CitationRecord {
  std::string id;
  int year = 0;
  std::vector<FieldWeight> fields;
  std::vector<std::string> references;
};

struct IngestOptions {
  int year_min = 2015;
  int year_max = 2020;
  double min_field_share = 0.01;  // fraction of in-window papers listing the field
};

// Papers after filtering. Each paper's type is its highest-weight major
// field (ties go to the lexicographically smallest name); papers without a
// major field are dropped.
struct Dataset {
  std::vector<std::string> ids;
  std::vector<int> years;
  std::vector<std::uint32_t> field;             // index into `fields`
  std::vector<std::vector<std::uint32_t>> refs;  // intra-dataset, sorted, no duplicates
  std::vector<std::string> fields;              // major fields, sorted by name
  std::size_t malformed_lines = 0;
  std::size_t duplicate_ids = 0;  // later records with a repeated id are ignored
  std::size_t out_of_window = 0;
  std::size_t without_major_field = 0;
  std::size_t dropped_references = 0;

  std::size_t size() const noexcept { return ids.size(); }
};

// Filters the records; throws kEmptyDataset if nothing survives.
Dataset build_dataset(const std::vector<CitationRecord>& records, const IngestOptions& options);

// JSON lines with {"id","year","fos":[{"name","w"}],"references":[...]}.
// Malformed lines are skipped and counted.
Dataset ingest(std::istream& in, const IngestOptions& options);
Dataset ingest(const std::string& path, const IngestOptions& options);

// ----------------------------------------------------------------------------
// Field clustering

struct FieldClustering {
  std::uint32_t k = 0;
  std::vector<std::uint32_t> cluster;   // per field
  std::vector<double> eigenvalues;      // normalized Laplacian, ascending
  std::uint32_t components = 0;
};

// Symmetric field graph: weight(a, b) counts citations between papers of
// fields a and b in either direction.
std::vector<std::vector<double>> field_graph(const Dataset& data);

// Normalized-Laplacian spectral clustering of a symmetric non-negative
// weight matrix. Without `k` the number of clusters is the position of the
// largest eigengap, never below the number of connected components.
// Clusters are numbered by their smallest member.
FieldClustering spectral_clustering(const std::vector<std::vector<double>>& weights,
                                    std::optional<std::uint32_t> k, std::uint64_t seed);

FieldClustering cluster_fields(const Dataset& data, std::optional<std::uint32_t> k,
                               std::uint64_t seed);

// Citation graph of one cluster: arcs point from citing to cited paper,
// types are the fields of the cluster renumbered from 0. Cross-cluster
// citations are dropped.
struct ClusterGraph {
  TypedGraph graph;
  std::vector<std::uint32_t> paper;        // dataset index per node
  std::vector<std::uint32_t> field_index;  // dataset field index per local type
};

ClusterGraph cluster_graph(const Dataset& data, const FieldClustering& clustering,
                           std::uint32_t cluster);

// ----------------------------------------------------------------------------
// Phase assignments

// G(u): the subgraph induced by u's out-neighbours (u excluded). Local index i
// refers to nodes[i]; `mediators[i]` lists local j with arc nodes[j] -> nodes[i].
struct DescendantGraph {
  TypeId focal_type = 0;
  std::vector<NodeId> nodes;
  std::vector<TypeId> types;
  std::vector<std::vector<std::uint32_t>> mediators;

  std::size_t size() const noexcept { return nodes.size(); }
};

DescendantGraph descendant_graph(const TypedGraph& g, NodeId u);

// Builds G(u) directly from local types and local arcs (from, to).
DescendantGraph make_descendant_graph(TypeId focal_type, std::vector<TypeId> types,
                                      std::span<const std::pair<std::uint32_t, std::uint32_t>> arcs);

// Phase per local node, 1 or 2.
using PhaseAssignment = std::vector<std::uint8_t>;

bool is_feasible(const DescendantGraph& gu, const PhaseAssignment& phi);

struct AssignmentSet {
  std::vector<PhaseAssignment> assignments;
  bool exact = true;          // false: uniform sample with replacement
  std::uint64_t attempts = 0; // rejection attempts when sampling
};

struct AssignmentOptions {
  std::uint32_t exact_cap = 16;    // max free nodes for exact enumeration
  std::uint32_t sample_size = 512;
  std::uint64_t max_attempts = 1u << 22;
};

// Nodes without mediators are forced to phase 1; the others are free. All
// feasible assignments when the free set is within the cap, otherwise a
// rejection sample over the free nodes.
AssignmentSet enumerate_feasible_assignments(const DescendantGraph& gu, std::uint64_t seed,
                                             const AssignmentOptions& options = {});

// Observed (n_s, n_d, n_fs, n_fd) for a feasible assignment.
std::array<double, 4> assignment_stats(const DescendantGraph& gu, const PhaseAssignment& phi);

// ----------------------------------------------------------------------------
// Likelihood and fitting

struct Theta {
  double n_s = 1.0;
  double n_d = 1.0;
  double n_fs = 1.0;
  double n_fd = 1.0;

  std::array<double, 4> as_array() const { return {n_s, n_d, n_fs, n_fd}; }
  static Theta from_array(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }
};

// Distinct assignment statistics of one node with log(multiplicity / |Phi_u|).
struct NodeEvidence {
  std::vector<std::array<double, 4>> counts;
  std::vector<double> log_weight;
  bool exact = true;
};

NodeEvidence node_evidence(const DescendantGraph& gu, std::uint64_t seed,
                           const AssignmentOptions& options = {});

// Evidence for the given nodes of a directed citation graph; node i uses
// seed stream i so the result does not depend on thread scheduling.
std::vector<NodeEvidence> collect_evidence(const TypedGraph& g, std::span<const NodeId> nodes,
                                           std::uint64_t seed,
                                           const AssignmentOptions& options = {});

// log l_u(theta). Throws kDomain unless every component is positive.
double node_log_likelihood(const NodeEvidence& evidence, const Theta& theta);

double total_log_likelihood(std::span<const NodeEvidence> evidence, const Theta& theta);

struct FitOptions {
  int starts = 8;
  double start_min = 0.1;
  double start_max = 50.0;
  double lower_bound = 1e-4;
  double upper_bound = 1e4;
  double step_tolerance = 1e-8;
  int max_iterations = 500;
  std::uint64_t seed = 1;
  std::size_t min_usable_nodes = 50;
};

struct FitStart {
  Theta initial;
  Theta theta;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct FitResult {
  Theta theta;
  double log_likelihood = 0.0;
  bool converged = false;
  // Components within 1% of an optimizer bound (e.g. no phase-2 evidence).
  std::array<bool, 4> at_bound{false, false, false, false};
  std::vector<FitStart> starts;
  std::size_t best_start = 0;
  // Largest relative spread of the converged optima across starts.
  double start_spread = 0.0;
  std::size_t nodes = 0;
  std::size_t usable_nodes = 0;
};

// Maximizes the total log likelihood with BFGS in a bounded log space,
// central-difference gradients and several log-uniform starts. Evidence
// order does not matter. Throws kInvalidArgument below min_usable_nodes
// (nodes with at least one descendant) and kNoConvergence, carrying the
// best iterate in the message, if no start converges.
FitResult fit_theta(std::span<const NodeEvidence> evidence, const FitOptions& options = {});

struct EquilibriumPrediction {
  double n_s = 0.0;
  double n_d = 0.0;
  double n_f = 0.0;
  double alpha = 0.0;
  double f_inf = 0.0;
  double f_inf_no_tc = 0.0;
  double tc_contribution = 0.0;
  bool alpha_valid = true;
  std::vector<std::string> warnings;
};

// Long-run integration implied by theta for K types, and the same with
// N_F = 0; the difference is attributed to triadic closure.
EquilibriumPrediction predict_equilibrium(const Theta& theta, std::uint32_t num_types);

// ----------------------------------------------------------------------------
// Synthetic data

struct SyntheticData {
  TypedGraph graph;         // directed, arcs from citing to cited node
  NodeId first_arrival = 0; // nodes before this belong to the seed graph
  double observed_integration = 0.0;  // over links created by arrivals
  std::uint64_t shortfall = 0;
};

// Growth where every arrival draws its own N_S, N_D, N_FS, N_FD from
// exponentials with means theta (stochastically rounded to integers).
SyntheticData generate_synthetic(const Theta& theta, std::uint32_t num_types,
                                 std::uint64_t arrivals, std::uint64_t seed,
                                 std::vector<double> type_dist = {});

// ----------------------------------------------------------------------------
// Pipeline

struct EstimateOptions {
  IngestOptions ingest;
  std::optional<std::uint32_t> cluster_k;
  std::uint64_t seed = 1;
  FitOptions fit;
  AssignmentOptions assignments;
};

struct ClusterReport {
  std::uint32_t cluster = 0;
  std::vector<std::string> fields;
  std::size_t nodes = 0;
  std::size_t usable_nodes = 0;
  std::size_t citations = 0;
  std::size_t sampled_nodes = 0;  // nodes whose assignments were sampled
  double observed_integration = 0.0;
  std::optional<FitResult> fit;
  std::optional<EquilibriumPrediction> prediction;
  std::string skipped;  // reason, if the cluster was not fitted
};

struct EstimateReport {
  std::size_t papers = 0;
  FieldClustering clustering;
  std::vector<ClusterReport> clusters;
};

EstimateReport estimate(const Dataset& data, const EstimateOptions& options);

}  // namespace netseg

#endif  // NETSEG_ESTIMATION_HPP_
