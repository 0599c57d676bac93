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

#ifndef NETSEG_SBM_HPP_
#define NETSEG_SBM_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "netseg/graph.hpp"

namespace netseg {

// Stochastic block model: pairs inside a group link with probability p,
// pairs across groups with probability q.
struct SbmParams {
  std::vector<std::uint32_t> group_sizes;
  double p = 0.0;
  double q = 0.0;

  // Throws kInvalidArgument unless K >= 2, all sizes positive, p, q in [0, 1].
  void validate() const;
};

// Power sums of the group sizes and the combinations the closed forms use.
struct MomentSums {
  double n = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double A = 0.0;  // n^2 - m2
  double B = 0.0;  // n m2 - m3
  double C = 0.0;  // m3 A - m2 B
};

MomentSums moment_sums(const std::vector<std::uint32_t>& group_sizes);

// Expected edge, missing-edge and wedge counts split by colour.
struct ExpectedCounts {
  double e_m = 0.0;
  double e_b = 0.0;
  double o_m = 0.0;
  double o_b = 0.0;
  double w_m = 0.0;
  double w_b = 0.0;
};

// Large-n forms with the lower-order terms dropped.
ExpectedCounts expected_counts(const SbmParams& params);
// Finite-n expectations: binomial pair and triple counts kept exactly.
ExpectedCounts expected_counts_exact(const SbmParams& params);

enum class EffectSign { kNegative = -1, kNeutral = 0, kPositive = 1 };
const char* to_string(EffectSign sign) noexcept;

// Three-way comparison of a and b with relative tolerance 1e-12.
EffectSign compare_with_tolerance(double a, double b);

// Sign of the expected integration change from closing one uniform wedge,
// decided by comparing w_b / w_m with e_b / e_m (large-n forms).
// Throws kNoEdges when p = q = 0.
EffectSign absolute_effect_sign(const SbmParams& params);

struct RelativeBounds {
  double lower = 0.0;   // l(gamma)
  double upper = 0.0;   // u(gamma)
  double l_star = 0.0;  // lower bound at gamma = 1
};

// Band [l, u] of p/q on which closing a wedge raises integration at least as
// much as adding a gamma-homophilous random edge. Requires gamma >= 1.
// Throws kDegenerateGrouping when m3 A = 0.
RelativeBounds relative_bounds(const SbmParams& params, double gamma);

// Predicted sign of (wedge-closure gain - gamma-edge gain): positive strictly
// inside the band, neutral on its boundary, negative outside.
EffectSign relative_effect_sign(const SbmParams& params, double gamma);

// Two-group eigenvector-centrality analysis; ratios are minority (group 1)
// over majority (group 0).
struct CentralityReport {
  double beta = 0.0;
  double ratio_before = 0.0;    // EV2 / EV1 of the expected adjacency
  double delta_tc = 0.0;        // change from closing one wedge
  double delta_baseline = 0.0;  // change from one gamma-homophilous edge
  double c_pq = 0.0;
  double gamma_threshold = 0.0;  // (p / q) c(p, q)
  bool tc_beats_baseline = false;  // baseline gamma above the threshold
};

// Throws kDegenerateProbability when q is 0 or 1, kInvalidArgument unless
// exactly two groups.
CentralityReport centrality_analysis(const SbmParams& params, double baseline_gamma);

struct PowerIterationOptions {
  double tolerance = 1e-10;
  int max_iterations = 100000;
};

// Mean eigenvector centrality of type-1 nodes over that of type-0 nodes, via
// power iteration on the (shifted) adjacency of the underlying undirected
// graph. Throws kNoDominantEigenvalue if the residual does not fall below
// the tolerance.
double measured_centrality_ratio(const TypedGraph& g, const PowerIterationOptions& options = {});

// n^2 >= m2, n m2 >= m3, n m3 >= m2^2, 2 m2^2 >= n m3, 2 n m2^2 >= n^2 m3 + m2 m3,
// evaluated in exact integer arithmetic.
std::array<bool, 5> moment_inequalities(const std::vector<std::uint32_t>& group_sizes);

// Undirected SBM sample; group k occupies a contiguous id range with type k.
TypedGraph sample_sbm(const SbmParams& params, std::uint64_t seed);

}  // namespace netseg

#endif  // NETSEG_SBM_HPP_
