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

#ifndef NETSEG_FIXED_NODE_HPP_
#define NETSEG_FIXED_NODE_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "netseg/graph.hpp"

namespace netseg {

// Rewiring model on a fixed two-type node set with a fixed edge count. Each
// iteration a focal node picks a candidate through a two-step walk
// (probability c) or uniformly (1 - c). The link is accepted with s' or s when
// the types match and 1 - s' or 1 - s otherwise; an accepted link replaces one
// of the focal node's existing links.
struct FixedNodeParams {
  double c = 0.0;
  double s = 0.5;
  double s_prime = 0.5;
  std::array<double, 2> n_theta{0.5, 0.5};  // group fractions

  void validate() const;
};

// Mean-field drift (dP11/dt, dP22/dt) as a function of the one-step
// same-type transition probabilities T11 and T22; one time unit is L
// iterations for L edges.
std::array<double, 2> meanfield_rhs(double t11, double t22, const FixedNodeParams& params);

// Partial derivatives of the drift: {d1/dt11, d1/dt22, d2/dt11, d2/dt22}.
std::array<double, 4> meanfield_jacobian(double t11, double t22, const FixedNodeParams& params);

// T_{k|k} = 2 P_kk / (1 + P_kk - P_ll) and its inverse. At T11 = T22 = 1 the
// inverse is not unique (P11 + P22 = 1); P11 = P22 = 1/2 is returned.
std::array<double, 2> p_to_t(double p11, double p22);
std::array<double, 2> t_to_p(double t11, double t22);

struct FixedPoint {
  double t11 = 0.0;
  double t22 = 0.0;
  double p11 = 0.0;
  double p22 = 0.0;
  bool stable = false;
  double integration = 0.0;  // 1 - P11 - P22
  std::array<double, 2> eigen_real{0.0, 0.0};  // real parts, Jacobian in P
};

struct FixedPointOptions {
  int grid = 200;             // cells per axis for the sign-change scan
  double tolerance = 1e-10;   // residual for root polishing
  double merge_radius = 1e-6;
};

// All fixed points in [0,1]^2 with their stability. Throws
// kNoStableEquilibrium if none of them is stable.
std::vector<FixedPoint> find_fixed_points(const FixedNodeParams& params,
                                          const FixedPointOptions& options = {});

// The stable fixed point reached by integrating the mean-field flow from the
// edge fractions (p11, p22).
FixedPoint equilibrium_from(const FixedNodeParams& params, double p11, double p22,
                            const FixedPointOptions& options = {});

enum class CollisionPolicy {
  kRejectAndAdvance,  // an already-linked candidate wastes the iteration
  kResample,          // redraw the candidate (bounded attempts)
};

// What happens when the triadic branch is drawn for a focal node with no
// links. Wasting the iteration keeps the c = 1 process purely triadic, so a
// fully segregated graph stays segregated; the fallback draws a uniform
// candidate instead.
enum class IsolatedFocalPolicy {
  kWaste,
  kUniformFallback,
};

struct FixedNodeOptions {
  CollisionPolicy collision = CollisionPolicy::kRejectAndAdvance;
  IsolatedFocalPolicy isolated = IsolatedFocalPolicy::kWaste;
  int resample_attempts = 32;
};

struct FixedNodeRun {
  // Edge fractions and integration after every L iterations (L = edge count).
  std::vector<double> p11;
  std::vector<double> p22;
  std::vector<double> integration;
  TypedGraph graph;
  std::uint64_t accepted = 0;
  std::uint64_t collisions = 0;
  std::uint64_t isolated_focal = 0;  // triadic draws for a focal node with no links
};

FixedNodeRun simulate_fixed_node(TypedGraph initial, const FixedNodeParams& params,
                                 std::uint64_t iterations, std::uint64_t seed,
                                 const FixedNodeOptions& options = {});

}  // namespace netseg

#endif  // NETSEG_FIXED_NODE_HPP_
