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

#include "netseg/fixed_node.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "netseg/errors.hpp"
#include "netseg/rng.hpp"

namespace netseg {
namespace {

constexpr std::uint64_t kFixedNodeStream = 0xf1ed;

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

// Drift of P_aa for the group with fraction n (other group m), where a = T_a|a
// and b = T_b|b of the other group. Returns value and partials in (a, b).
struct Component {
  double value;
  double d_a;
  double d_b;
};

Component drift_component(double a, double b, double n, double m, const FixedNodeParams& p) {
  const double c = p.c;
  const double s = p.s;
  const double sp = p.s_prime;
  const double t2s = a * a + (1.0 - a) * (1.0 - b);
  const double t2d = a * (1.0 - a) + (1.0 - a) * b;
  const double t2s_a = 2.0 * a - (1.0 - b);
  const double t2s_b = -(1.0 - a);
  const double t2d_a = 1.0 - 2.0 * a - b;
  const double t2d_b = 1.0 - a;

  const double gain = (1.0 - c) * n * s + c * t2s * sp;
  const double total = gain + (1.0 - c) * m * (1.0 - s) + c * t2d * (1.0 - sp);
  const double total_a = c * sp * t2s_a + c * (1.0 - sp) * t2d_a;
  const double total_b = c * sp * t2s_b + c * (1.0 - sp) * t2d_b;

  Component out{};
  out.value = n * gain - n * a * total;
  out.d_a = n * c * sp * t2s_a - n * total - n * a * total_a;
  out.d_b = n * c * sp * t2s_b - n * a * total_b;
  return out;
}

FixedPoint make_point(double t11, double t22, const FixedNodeParams& params) {
  FixedPoint fp;
  fp.t11 = std::clamp(t11, 0.0, 1.0);
  fp.t22 = std::clamp(t22, 0.0, 1.0);
  const auto p = t_to_p(fp.t11, fp.t22);
  fp.p11 = p[0];
  fp.p22 = p[1];
  fp.integration = 1.0 - p[0] - p[1];

  // Jacobian in P coordinates: J_T * dT/dP.
  const auto jt = meanfield_jacobian(fp.t11, fp.t22, params);
  const double d1 = 1.0 + fp.p11 - fp.p22;
  const double d2 = 1.0 + fp.p22 - fp.p11;
  double t1_p1 = 0.0, t1_p2 = 0.0, t2_p1 = 0.0, t2_p2 = 0.0;
  if (d1 > 0.0) {
    t1_p1 = 2.0 * (1.0 - fp.p22) / (d1 * d1);
    t1_p2 = 2.0 * fp.p11 / (d1 * d1);
  }
  if (d2 > 0.0) {
    t2_p2 = 2.0 * (1.0 - fp.p11) / (d2 * d2);
    t2_p1 = 2.0 * fp.p22 / (d2 * d2);
  }
  const double j11 = jt[0] * t1_p1 + jt[1] * t2_p1;
  const double j12 = jt[0] * t1_p2 + jt[1] * t2_p2;
  const double j21 = jt[2] * t1_p1 + jt[3] * t2_p1;
  const double j22 = jt[2] * t1_p2 + jt[3] * t2_p2;
  const double tr = j11 + j22;
  const double det = j11 * j22 - j12 * j21;
  const double disc = 0.25 * tr * tr - det;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    fp.eigen_real = {0.5 * tr + r, 0.5 * tr - r};
  } else {
    fp.eigen_real = {0.5 * tr, 0.5 * tr};
  }
  fp.stable = fp.eigen_real[0] < 0.0 && fp.eigen_real[1] < 0.0;
  return fp;
}

// Newton iteration in T coordinates. Returns false if it leaves the unit
// square or fails to converge.
bool polish(double& t11, double& t22, const FixedNodeParams& params, double tol) {
  constexpr double kSlack = 1e-9;
  for (int iter = 0; iter < 100; ++iter) {
    const auto f = meanfield_rhs(t11, t22, params);
    if (std::abs(f[0]) < tol && std::abs(f[1]) < tol) return true;
    const auto j = meanfield_jacobian(t11, t22, params);
    const double det = j[0] * j[3] - j[1] * j[2];
    if (!(std::abs(det) > 1e-300)) return false;
    const double dx = (f[0] * j[3] - f[1] * j[1]) / det;
    const double dy = (j[0] * f[1] - j[2] * f[0]) / det;
    t11 -= dx;
    t22 -= dy;
    if (!std::isfinite(t11) || !std::isfinite(t22)) return false;
    if (t11 < -kSlack || t11 > 1.0 + kSlack || t22 < -kSlack || t22 > 1.0 + kSlack) {
      return false;
    }
    t11 = std::clamp(t11, 0.0, 1.0);
    t22 = std::clamp(t22, 0.0, 1.0);
  }
  const auto f = meanfield_rhs(t11, t22, params);
  return std::abs(f[0]) < tol && std::abs(f[1]) < tol;
}

std::array<double, 2> drift_in_p(double p11, double p22, const FixedNodeParams& params) {
  const auto t = p_to_t(p11, p22);
  return meanfield_rhs(t[0], t[1], params);
}

}  // namespace

void FixedNodeParams::validate() const {
  if (!in_unit(c) || !in_unit(s) || !in_unit(s_prime)) {
    throw Error(ErrorCode::kInvalidArgument, "c, s and s' must lie in [0, 1]");
  }
  if (!(n_theta[0] > 0.0) || !(n_theta[1] > 0.0) ||
      std::abs(n_theta[0] + n_theta[1] - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "group fractions must be positive and sum to 1");
  }
}

std::array<double, 2> meanfield_rhs(double t11, double t22, const FixedNodeParams& params) {
  const auto a = drift_component(t11, t22, params.n_theta[0], params.n_theta[1], params);
  const auto b = drift_component(t22, t11, params.n_theta[1], params.n_theta[0], params);
  return {a.value, b.value};
}

std::array<double, 4> meanfield_jacobian(double t11, double t22, const FixedNodeParams& params) {
  const auto a = drift_component(t11, t22, params.n_theta[0], params.n_theta[1], params);
  const auto b = drift_component(t22, t11, params.n_theta[1], params.n_theta[0], params);
  return {a.d_a, a.d_b, b.d_b, b.d_a};
}

std::array<double, 2> p_to_t(double p11, double p22) {
  if (p11 < 0.0 || p22 < 0.0 || p11 + p22 > 1.0 + 1e-12) {
    throw Error(ErrorCode::kDomain, "edge fractions must be non-negative with sum <= 1");
  }
  const double d1 = 1.0 + p11 - p22;
  const double d2 = 1.0 + p22 - p11;
  return {d1 > 0.0 ? 2.0 * p11 / d1 : 0.0, d2 > 0.0 ? 2.0 * p22 / d2 : 0.0};
}

std::array<double, 2> t_to_p(double t11, double t22) {
  if (!in_unit(t11) || !in_unit(t22)) {
    throw Error(ErrorCode::kDomain, "transition probabilities must lie in [0, 1]");
  }
  const double denom = 2.0 - t11 - t22;
  if (denom <= 0.0) return {0.5, 0.5};
  return {t11 * (1.0 - t22) / denom, t22 * (1.0 - t11) / denom};
}

std::vector<FixedPoint> find_fixed_points(const FixedNodeParams& params,
                                          const FixedPointOptions& options) {
  params.validate();
  if (options.grid < 2) throw Error(ErrorCode::kInvalidArgument, "grid must be >= 2");
  const int g = options.grid;
  const double h = 1.0 / g;

  std::vector<std::array<double, 2>> values(static_cast<std::size_t>(g + 1) * (g + 1));
  for (int i = 0; i <= g; ++i) {
    for (int j = 0; j <= g; ++j) {
      values[static_cast<std::size_t>(i) * (g + 1) + j] = meanfield_rhs(i * h, j * h, params);
    }
  }
  auto at = [&](int i, int j) -> const std::array<double, 2>& {
    return values[static_cast<std::size_t>(i) * (g + 1) + j];
  };

  std::vector<std::pair<double, double>> starts;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      bool crosses = true;
      for (int k = 0; k < 2 && crosses; ++k) {
        const double v[4] = {at(i, j)[k], at(i + 1, j)[k], at(i, j + 1)[k], at(i + 1, j + 1)[k]};
        const double lo = *std::min_element(v, v + 4);
        const double hi = *std::max_element(v, v + 4);
        crosses = lo <= 0.0 && hi >= 0.0;
      }
      if (crosses) starts.emplace_back((i + 0.5) * h, (j + 0.5) * h);
    }
  }
  // A coarse lattice including the corners catches roots on the boundary that
  // produce no sign change inside a cell.
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j <= 10; ++j) starts.emplace_back(i / 10.0, j / 10.0);
  }

  std::vector<std::pair<double, double>> roots;
  for (auto [x, y] : starts) {
    if (!polish(x, y, params, options.tolerance)) continue;
    const bool seen = std::any_of(roots.begin(), roots.end(), [&](const auto& r) {
      return std::hypot(r.first - x, r.second - y) < options.merge_radius;
    });
    if (!seen) roots.emplace_back(x, y);
  }
  std::sort(roots.begin(), roots.end());

  std::vector<FixedPoint> out;
  out.reserve(roots.size());
  for (auto [x, y] : roots) out.push_back(make_point(x, y, params));
  if (std::none_of(out.begin(), out.end(), [](const FixedPoint& fp) { return fp.stable; })) {
    throw Error(ErrorCode::kNoStableEquilibrium,
                "no stable fixed point for c=" + std::to_string(params.c) +
                    ", s=" + std::to_string(params.s));
  }
  return out;
}

FixedPoint equilibrium_from(const FixedNodeParams& params, double p11, double p22,
                            const FixedPointOptions& options) {
  params.validate();
  p_to_t(p11, p22);  // domain check

  auto clamp_p = [](double& a, double& b) {
    a = std::max(a, 0.0);
    b = std::max(b, 0.0);
    const double sum = a + b;
    if (sum > 1.0) {
      a /= sum;
      b /= sum;
    }
  };

  // Classic RK4 on the flow in P coordinates, then Newton to finish.
  constexpr double kDt = 0.05;
  constexpr long kMaxSteps = 20'000'000;
  for (long step = 0; step < kMaxSteps; ++step) {
    const auto k1 = drift_in_p(p11, p22, params);
    if (std::abs(k1[0]) < 1e-12 && std::abs(k1[1]) < 1e-12) break;
    double a = p11 + 0.5 * kDt * k1[0], b = p22 + 0.5 * kDt * k1[1];
    clamp_p(a, b);
    const auto k2 = drift_in_p(a, b, params);
    a = p11 + 0.5 * kDt * k2[0];
    b = p22 + 0.5 * kDt * k2[1];
    clamp_p(a, b);
    const auto k3 = drift_in_p(a, b, params);
    a = p11 + kDt * k3[0];
    b = p22 + kDt * k3[1];
    clamp_p(a, b);
    const auto k4 = drift_in_p(a, b, params);
    p11 += kDt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    p22 += kDt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    clamp_p(p11, p22);
  }
  auto t = p_to_t(p11, p22);
  double t11 = t[0], t22 = t[1];
  if (!polish(t11, t22, params, options.tolerance)) {
    throw Error(ErrorCode::kNoConvergence, "mean-field flow did not settle on a fixed point");
  }
  FixedPoint fp = make_point(t11, t22, params);
  if (!fp.stable) {
    throw Error(ErrorCode::kNoStableEquilibrium, "flow settled on a non-stable fixed point");
  }
  return fp;
}

FixedNodeRun simulate_fixed_node(TypedGraph g, const FixedNodeParams& params,
                                 std::uint64_t iterations, std::uint64_t seed,
                                 const FixedNodeOptions& options) {
  params.validate();
  if (g.directed() || g.num_types() != 2) {
    throw Error(ErrorCode::kInvalidArgument, "fixed-node model needs an undirected two-type graph");
  }
  if (g.node_count() < 3 || g.edge_count() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "fixed-node model needs >= 3 nodes and >= 1 edge");
  }
  if (options.resample_attempts < 1) {
    throw Error(ErrorCode::kInvalidArgument, "resample_attempts must be >= 1");
  }

  const auto n = static_cast<std::uint64_t>(g.node_count());
  const std::uint64_t edges = g.edge_count();
  std::uint64_t same[2] = {0, 0};
  for (const auto& [u, v] : g.edges()) {
    if (g.type(u) == g.type(v)) ++same[g.type(u)];
  }

  FixedNodeRun run;
  auto record = [&] {
    const double p11 = static_cast<double>(same[0]) / edges;
    const double p22 = static_cast<double>(same[1]) / edges;
    run.p11.push_back(p11);
    run.p22.push_back(p22);
    run.integration.push_back(1.0 - p11 - p22);
  };
  auto remove = [&](NodeId a, NodeId b) {
    g.remove_edge(a, b);
    if (g.type(a) == g.type(b)) --same[g.type(a)];
  };

  Rng rng(seed, kFixedNodeStream);
  const int attempts =
      options.collision == CollisionPolicy::kResample ? options.resample_attempts : 1;

  for (std::uint64_t it = 1; it <= iterations; ++it) {
    const auto focal = static_cast<NodeId>(rng.below(n));
    bool triadic = rng.bernoulli(params.c);
    if (triadic && g.degree(focal) == 0) {
      ++run.isolated_focal;
      if (options.isolated == IsolatedFocalPolicy::kWaste) {
        if (it % edges == 0) record();
        continue;
      }
      triadic = false;
    }

    bool found = false;
    NodeId cand = 0;
    for (int attempt = 0; attempt < attempts && !found; ++attempt) {
      if (triadic) {
        const auto nf = g.neighbors(focal);
        const NodeId mid = nf[rng.below(nf.size())];
        const auto nm = g.neighbors(mid);
        if (nm.size() <= 1) continue;
        // Uniform over mid's neighbors other than the focal node.
        const auto pos = static_cast<std::size_t>(
            std::lower_bound(nm.begin(), nm.end(), focal) - nm.begin());
        auto k = static_cast<std::size_t>(rng.below(nm.size() - 1));
        if (k >= pos) ++k;
        cand = nm[k];
      } else {
        cand = static_cast<NodeId>(rng.below(n - 1));
        if (cand >= focal) ++cand;
      }
      if (g.has_edge(focal, cand)) {
        ++run.collisions;
        continue;
      }
      found = true;
    }

    if (found) {
      const bool alike = g.type(focal) == g.type(cand);
      const double base = triadic ? params.s_prime : params.s;
      if (rng.bernoulli(alike ? base : 1.0 - base)) {
        if (g.degree(focal) > 0) {
          const auto nf = g.neighbors(focal);
          remove(focal, nf[rng.below(nf.size())]);
        } else if (g.degree(cand) > 0) {
          const auto nc = g.neighbors(cand);
          remove(cand, nc[rng.below(nc.size())]);
        } else {
          const auto all = g.edges();
          const auto& e = all[rng.below(all.size())];
          remove(e.first, e.second);
        }
        g.add_edge(focal, cand);
        if (alike) ++same[g.type(focal)];
        ++run.accepted;
      }
    }
    if (it % edges == 0) record();
  }
  run.graph = std::move(g);
  return run;
}

}  // namespace netseg
