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

#include "netseg/sbm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netseg/errors.hpp"
#include "netseg/rng.hpp"

namespace netseg {
namespace {

constexpr double kSignTolerance = 1e-12;

double choose2(double x) { return 0.5 * x * (x - 1.0); }

}  // namespace

void SbmParams::validate() const {
  if (group_sizes.size() < 2) throw Error(ErrorCode::kInvalidArgument, "SBM needs at least two groups");
  for (auto n : group_sizes) {
    if (n == 0) throw Error(ErrorCode::kInvalidArgument, "group sizes must be positive");
  }
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "p and q must lie in [0, 1]");
  }
}

MomentSums moment_sums(const std::vector<std::uint32_t>& group_sizes) {
  MomentSums s;
  for (auto nk : group_sizes) {
    const double x = nk;
    s.n += x;
    s.m2 += x * x;
    s.m3 += x * x * x;
  }
  s.A = s.n * s.n - s.m2;
  s.B = s.n * s.m2 - s.m3;
  s.C = s.m3 * s.A - s.m2 * s.B;
  return s;
}

ExpectedCounts expected_counts(const SbmParams& params) {
  params.validate();
  const auto s = moment_sums(params.group_sizes);
  const double p = params.p, q = params.q;
  ExpectedCounts c;
  c.e_m = 0.5 * p * s.m2;
  c.e_b = 0.5 * q * s.A;
  c.o_m = 0.5 * (1.0 - p) * s.m2;
  c.o_b = 0.5 * (1.0 - q) * s.A;
  c.w_m = 0.5 * p * p * (1.0 - p) * s.m3 + 0.5 * q * q * (1.0 - p) * s.B;
  c.w_b = p * q * (1.0 - q) * s.B +
          0.5 * q * q * (1.0 - q) * (s.n * s.n * s.n + 2.0 * s.m3 - 3.0 * s.n * s.m2);
  return c;
}

ExpectedCounts expected_counts_exact(const SbmParams& params) {
  params.validate();
  const double p = params.p, q = params.q;
  const auto& sizes = params.group_sizes;
  double n = 0.0;
  for (auto nk : sizes) n += nk;
  ExpectedCounts c;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const double nk = sizes[k];
    const double pairs = choose2(nk);
    c.e_m += pairs * p;
    c.o_m += pairs * (1.0 - p);
    // Mediator inside the group, then outside it.
    c.w_m += pairs * (nk - 2.0) * p * p * (1.0 - p) + pairs * (n - nk) * q * q * (1.0 - p);
    for (std::size_t l = k + 1; l < sizes.size(); ++l) {
      const double nl = sizes[l];
      const double cross = nk * nl;
      c.e_b += cross * q;
      c.o_b += cross * (1.0 - q);
      c.w_b += cross * ((nk - 1.0 + nl - 1.0) * p * q + (n - nk - nl) * q * q) * (1.0 - q);
    }
  }
  return c;
}

const char* to_string(EffectSign sign) noexcept {
  switch (sign) {
    case EffectSign::kNegative: return "negative";
    case EffectSign::kNeutral: return "neutral";
    case EffectSign::kPositive: return "positive";
  }
  return "unknown";
}

EffectSign compare_with_tolerance(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (std::abs(a - b) <= kSignTolerance * scale) return EffectSign::kNeutral;
  return a > b ? EffectSign::kPositive : EffectSign::kNegative;
}

EffectSign absolute_effect_sign(const SbmParams& params) {
  params.validate();
  if (params.p == 0.0 && params.q == 0.0) {
    throw Error(ErrorCode::kNoEdges, "p = q = 0 produces no edges");
  }
  const auto c = expected_counts(params);
  // w_b / w_m > e_b / e_m, cross-multiplied so that zero counts are harmless.
  return compare_with_tolerance(c.w_b * c.e_m, c.e_b * c.w_m);
}

RelativeBounds relative_bounds(const SbmParams& params, double gamma) {
  params.validate();
  if (!(gamma >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "gamma must be >= 1");
  const auto s = moment_sums(params.group_sizes);
  const double denom = s.m3 * s.A;
  if (denom <= 0.0) throw Error(ErrorCode::kDegenerateGrouping, "m3 * A vanishes");
  const double g = gamma * s.m2 * s.B;
  const double d = g - s.m3 * s.A;
  const double root = std::sqrt(d * d + (gamma - 1.0) * s.n * s.m2 * s.m3 * s.A * s.A);
  RelativeBounds b;
  b.upper = (g + root) / denom;
  b.lower = (g - root) / denom;
  b.l_star = (2.0 * s.m2 * s.B - s.m3 * s.A) / denom;
  return b;
}

EffectSign relative_effect_sign(const SbmParams& params, double gamma) {
  const auto b = relative_bounds(params, gamma);
  if (params.q <= 0.0) throw Error(ErrorCode::kDegenerateProbability, "p/q undefined at q = 0");
  const double r = params.p / params.q;
  const auto lo = compare_with_tolerance(r, b.lower);
  const auto hi = compare_with_tolerance(b.upper, r);
  if (lo == EffectSign::kNegative || hi == EffectSign::kNegative) return EffectSign::kNegative;
  if (lo == EffectSign::kNeutral || hi == EffectSign::kNeutral) return EffectSign::kNeutral;
  return EffectSign::kPositive;
}

CentralityReport centrality_analysis(const SbmParams& params, double baseline_gamma) {
  params.validate();
  if (params.group_sizes.size() != 2) {
    throw Error(ErrorCode::kInvalidArgument, "centrality analysis needs exactly two groups");
  }
  const double p = params.p, q = params.q;
  if (q <= 0.0 || q >= 1.0) {
    throw Error(ErrorCode::kDegenerateProbability, "q must lie strictly inside (0, 1)");
  }
  if (!(baseline_gamma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "gamma must be >= 0");
  const double n1 = params.group_sizes[0];
  const double n2 = params.group_sizes[1];
  const double n = n1 + n2;
  const double dn = n1 - n2;

  CentralityReport r;
  r.beta = std::sqrt(dn * dn * p * p + 4.0 * n1 * n2 * q * q);
  const double shift = r.beta - dn * p;
  r.ratio_before = shift / (2.0 * n2 * q);

  const auto exact = expected_counts_exact(params);
  const double w = exact.w_m + exact.w_b;
  if (w > 0.0) {
    r.delta_tc = (n / w) * (dn / n2) * (p - q) * p * p * shift / (2.0 * q * r.beta);
  }
  const double o_gamma = exact.o_b + baseline_gamma * exact.o_m;
  if (o_gamma > 0.0) {
    r.delta_baseline = (1.0 / o_gamma) * (dn / n2) *
                       (p * (1.0 - q) / q - baseline_gamma * (1.0 - p)) * shift /
                       (2.0 * q * r.beta);
  }

  const double cubes = n1 * n1 * n1 + n2 * n2 * n2;
  const double cross = n * n1 * n2;
  const double num = cubes * p * p + cross * q * (2.0 * p + q);
  const double den =
      cubes * p * p + cross * (p * (2.0 * q + p) + (1.0 - p) / (1.0 - q) * (q * q - p * p));
  if (den <= 0.0) throw Error(ErrorCode::kDegenerateProbability, "c(p, q) denominator vanishes");
  r.c_pq = num / den;
  r.gamma_threshold = (p / q) * r.c_pq;
  r.tc_beats_baseline = baseline_gamma > r.gamma_threshold;
  return r;
}

double measured_centrality_ratio(const TypedGraph& g, const PowerIterationOptions& options) {
  if (g.num_types() != 2) {
    throw Error(ErrorCode::kInvalidArgument, "centrality ratio needs a two-type graph");
  }
  const auto n = g.node_count();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty graph");
  // Iterate with A + I: same eigenvectors, and the shift makes the dominant
  // eigenvalue unique in modulus for bipartite components.
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n);
  bool converged = false;
  for (int it = 0; it < options.max_iterations; ++it) {
    for (NodeId v = 0; v < n; ++v) {
      double acc = x[v];
      for (NodeId u : g.neighbors(v)) acc += x[u];
      y[v] = acc;
    }
    double lambda = 0.0, norm2 = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      lambda += x[v] * y[v];
      norm2 += y[v] * y[v];
    }
    double res2 = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      const double r = y[v] - lambda * x[v];
      res2 += r * r;
    }
    const double norm = std::sqrt(norm2);
    for (std::size_t v = 0; v < n; ++v) x[v] = y[v] / norm;
    if (std::sqrt(res2) <= options.tolerance * std::max(1.0, lambda)) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::kNoDominantEigenvalue, "power iteration did not converge");
  }
  double sum[2] = {0.0, 0.0};
  double count[2] = {0.0, 0.0};
  for (NodeId v = 0; v < n; ++v) {
    sum[g.type(v)] += x[v];
    count[g.type(v)] += 1.0;
  }
  if (count[0] == 0.0 || count[1] == 0.0 || sum[0] <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "both types need positive centrality mass");
  }
  return (sum[1] / count[1]) / (sum[0] / count[0]);
}

std::array<bool, 5> moment_inequalities(const std::vector<std::uint32_t>& group_sizes) {
  using I = __int128;
  I n = 0, m2 = 0, m3 = 0;
  for (auto nk : group_sizes) {
    if (nk == 0) throw Error(ErrorCode::kInvalidArgument, "group sizes must be positive");
    const I x = nk;
    n += x;
    m2 += x * x;
    m3 += x * x * x;
  }
  if (n > (I{1} << 24)) {
    throw Error(ErrorCode::kInvalidArgument, "total size above 2^24 overflows exact arithmetic");
  }
  return {n * n >= m2, n * m2 >= m3, n * m3 >= m2 * m2, 2 * m2 * m2 >= n * m3,
          2 * n * m2 * m2 >= n * n * m3 + m2 * m3};
}

TypedGraph sample_sbm(const SbmParams& params, std::uint64_t seed) {
  params.validate();
  const auto& sizes = params.group_sizes;
  std::vector<TypeId> types;
  std::vector<NodeId> start;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    start.push_back(static_cast<NodeId>(types.size()));
    types.insert(types.end(), sizes[k], static_cast<TypeId>(k));
  }
  TypedGraph g(std::move(types), static_cast<TypeId>(sizes.size()), false);
  Rng rng(seed);

  // Geometric skipping: the gap to the next linked pair in a block is
  // Geometric(prob), so the cost is linear in the number of edges.
  const auto link_block = [&](double prob, NodeId row_begin, NodeId row_end,
                              auto&& columns) {
    if (prob <= 0.0) return;
    const double log_q = std::log1p(-prob);
    const auto draw_skip = [&]() -> std::uint64_t {
      if (prob >= 1.0) return 0;
      const double gap = std::floor(std::log(rng.uniform_open_zero()) / log_q);
      return gap >= 1e18 ? static_cast<std::uint64_t>(1e18) : static_cast<std::uint64_t>(gap);
    };
    std::uint64_t skip = draw_skip();
    for (NodeId i = row_begin; i < row_end; ++i) {
      auto [col, len] = columns(i);
      while (skip < len) {
        g.add_edge(i, static_cast<NodeId>(col + skip));
        col += skip + 1;
        len -= skip + 1;
        skip = draw_skip();
      }
      skip -= len;
    }
  };

  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const NodeId begin = start[k];
    const NodeId end = begin + sizes[k];
    link_block(params.p, begin, end, [end](NodeId i) {
      return std::pair<std::uint64_t, std::uint64_t>(i + 1, end - i - 1);
    });
    for (std::size_t l = k + 1; l < sizes.size(); ++l) {
      const NodeId other = start[l];
      const std::uint64_t width = sizes[l];
      link_block(params.q, begin, end, [other, width](NodeId) {
        return std::pair<std::uint64_t, std::uint64_t>(other, width);
      });
    }
  }
  return g;
}

}  // namespace netseg
