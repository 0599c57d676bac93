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

#include "netseg/estimation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "netseg/errors.hpp"
#include "netseg/jr_model.hpp"
#include "netseg/parallel.hpp"
#include "netseg/rng.hpp"

namespace netseg {
namespace {

constexpr std::uint64_t kKMeansStream = 0xc1a5;
constexpr std::uint64_t kAssignmentStream = 0xa551;
constexpr std::uint64_t kFitStream = 0xf17;
constexpr std::uint64_t kSyntheticStream = 0x5a17;

// ----------------------------------------------------------------------------
// Ingest helpers

std::string json_id(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw Error(ErrorCode::kParse, "id must be a string or an integer");
}

CitationRecord parse_record(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  if (!j.is_object()) throw Error(ErrorCode::kParse, "record must be an object");
  CitationRecord r;
  r.id = json_id(j.at("id"));
  r.year = j.at("year").get<int>();
  if (j.contains("fos") && !j.at("fos").is_null()) {
    for (const auto& f : j.at("fos")) {
      FieldWeight fw{f.at("name").get<std::string>(), f.at("w").get<double>()};
      if (!(fw.weight >= 0.0)) throw Error(ErrorCode::kParse, "field weight must be >= 0");
      r.fields.push_back(std::move(fw));
    }
  }
  if (j.contains("references") && !j.at("references").is_null()) {
    for (const auto& ref : j.at("references")) r.references.push_back(json_id(ref));
  }
  return r;
}

// ----------------------------------------------------------------------------
// Clustering helpers

std::vector<std::uint32_t> components_of(const std::vector<std::vector<double>>& w) {
  const std::size_t m = w.size();
  std::vector<std::uint32_t> comp(m, std::numeric_limits<std::uint32_t>::max());
  std::uint32_t next = 0;
  for (std::size_t s = 0; s < m; ++s) {
    if (comp[s] != std::numeric_limits<std::uint32_t>::max()) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < m; ++b) {
        if (b != a && w[a][b] > 0.0 && comp[b] == std::numeric_limits<std::uint32_t>::max()) {
          comp[b] = next;
          stack.push_back(b);
        }
      }
    }
    ++next;
  }
  return comp;
}

// Relabels so that cluster ids follow the order of each cluster's smallest member.
std::vector<std::uint32_t> canonical_labels(const std::vector<std::uint32_t>& labels) {
  std::unordered_map<std::uint32_t, std::uint32_t> map;
  std::vector<std::uint32_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = map.find(labels[i]);
    if (it == map.end()) it = map.emplace(labels[i], static_cast<std::uint32_t>(map.size())).first;
    out[i] = it->second;
  }
  return out;
}

// k-means++ seeding followed by Lloyd iterations; best of several restarts.
std::vector<std::uint32_t> kmeans(const Eigen::MatrixXd& x, std::uint32_t k, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(x.rows());
  constexpr int kRestarts = 10;
  std::vector<std::uint32_t> best;
  double best_inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < kRestarts; ++r) {
    Rng rng = Rng(seed, kKMeansStream).split(static_cast<std::uint64_t>(r));
    Eigen::MatrixXd centers(k, x.cols());
    centers.row(0) = x.row(static_cast<Eigen::Index>(rng.below(n)));
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    for (std::uint32_t c = 1; c < k; ++c) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = (x.row(static_cast<Eigen::Index>(i)) - centers.row(c - 1)).squaredNorm();
        d2[i] = std::min(d2[i], d);
        total += d2[i];
      }
      std::size_t pick = 0;
      if (total > 0.0) {
        double target = rng.uniform() * total;
        for (pick = 0; pick + 1 < n; ++pick) {
          target -= d2[pick];
          if (target < 0.0) break;
        }
      } else {
        pick = rng.below(n);
      }
      centers.row(c) = x.row(static_cast<Eigen::Index>(pick));
    }
    std::vector<std::uint32_t> label(n, 0);
    double inertia = 0.0;
    for (int iter = 0; iter < 300; ++iter) {
      bool changed = false;
      inertia = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double bd = std::numeric_limits<double>::infinity();
        std::uint32_t bc = 0;
        for (std::uint32_t c = 0; c < k; ++c) {
          const double d = (x.row(static_cast<Eigen::Index>(i)) - centers.row(c)).squaredNorm();
          if (d < bd) {
            bd = d;
            bc = c;
          }
        }
        if (iter == 0 || label[i] != bc) changed = true;
        label[i] = bc;
        inertia += bd;
      }
      if (!changed) break;
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, x.cols());
      std::vector<std::size_t> count(k, 0);
      for (std::size_t i = 0; i < n; ++i) {
        sum.row(label[i]) += x.row(static_cast<Eigen::Index>(i));
        ++count[label[i]];
      }
      for (std::uint32_t c = 0; c < k; ++c) {
        if (count[c] > 0) centers.row(c) = sum.row(c) / static_cast<double>(count[c]);
      }
    }
    if (inertia < best_inertia - 1e-12) {
      best_inertia = inertia;
      best = label;
    }
  }
  return best;
}

// ----------------------------------------------------------------------------
// Assignment enumeration

// Calls fn(phi) for each feasible assignment (exact) or each accepted
// sample. Returns {exact, attempts}.
std::pair<bool, std::uint64_t> for_each_assignment(
    const DescendantGraph& gu, std::uint64_t seed, const AssignmentOptions& options,
    const std::function<void(const PhaseAssignment&)>& fn) {
  const std::size_t n = gu.size();
  std::vector<std::uint32_t> free;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!gu.mediators[i].empty()) free.push_back(i);
  }
  PhaseAssignment phi(n, 1);
  auto feasible = [&] {
    for (std::uint32_t i : free) {
      if (phi[i] != 2) continue;
      const auto& med = gu.mediators[i];
      if (std::none_of(med.begin(), med.end(), [&](std::uint32_t j) { return phi[j] == 1; })) {
        return false;
      }
    }
    return true;
  };

  if (free.size() <= options.exact_cap) {
    const std::uint64_t total = std::uint64_t{1} << free.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      for (std::size_t b = 0; b < free.size(); ++b) phi[free[b]] = (mask >> b) & 1u ? 2 : 1;
      if (feasible()) fn(phi);
    }
    return {true, total};
  }

  Rng rng(seed, kAssignmentStream);
  std::uint64_t attempts = 0;
  std::uint32_t accepted = 0;
  while (accepted < options.sample_size && attempts < options.max_attempts) {
    ++attempts;
    for (std::uint32_t i : free) phi[i] = static_cast<std::uint8_t>(1 + (rng() >> 63));
    if (feasible()) {
      fn(phi);
      ++accepted;
    }
  }
  if (accepted == 0) {
    std::fill(phi.begin(), phi.end(), 1);
    fn(phi);
  }
  return {false, attempts};
}

void check_theta(const Theta& theta) {
  for (double v : theta.as_array()) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kDomain, "theta components must be positive and finite");
    }
  }
}

bool evidence_less(const NodeEvidence& a, const NodeEvidence& b) {
  if (a.counts != b.counts) return a.counts < b.counts;
  return a.log_weight < b.log_weight;
}

bool is_usable(const NodeEvidence& e) {
  for (const auto& c : e.counts) {
    if (c[0] + c[1] + c[2] + c[3] > 0.0) return true;
  }
  return false;
}

// Bounded log parametrization: theta_i = exp(lo + (hi - lo) * sigmoid(x_i)).
struct Transform {
  double lo;
  double hi;

  double to_theta(double x) const {
    const double s = 1.0 / (1.0 + std::exp(-x));
    return std::exp(lo + (hi - lo) * s);
  }
  double to_x(double theta) const {
    double s = (std::log(theta) - lo) / (hi - lo);
    s = std::clamp(s, 1e-12, 1.0 - 1e-12);
    return std::log(s / (1.0 - s));
  }
};

using Vec4 = std::array<double, 4>;

struct BfgsOutcome {
  Vec4 x;
  double f;
  int iterations;
  bool converged;
};

BfgsOutcome bfgs(const std::function<double(const Vec4&)>& f, Vec4 x, double step_tol,
                 int max_iter) {
  auto gradient = [&](const Vec4& p) {
    Vec4 g{};
    for (int i = 0; i < 4; ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(p[i]));
      Vec4 a = p, b = p;
      a[i] += h;
      b[i] -= h;
      g[i] = (f(a) - f(b)) / (2.0 * h);
    }
    return g;
  };
  Eigen::Matrix4d hinv = Eigen::Matrix4d::Identity();
  double fx = f(x);
  Vec4 g = gradient(x);
  bool reset_once = false;
  for (int iter = 1; iter <= max_iter; ++iter) {
    const Eigen::Vector4d gv(g[0], g[1], g[2], g[3]);
    if (gv.lpNorm<Eigen::Infinity>() < 1e-11) return {x, fx, iter - 1, true};
    Eigen::Vector4d dir = -hinv * gv;
    if (dir.dot(gv) >= 0.0) {
      hinv.setIdentity();
      dir = -gv;
    }
    // Backtracking line search with the Armijo condition.
    double t = 1.0;
    Vec4 xn{};
    double fn = fx;
    bool ok = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (int i = 0; i < 4; ++i) xn[i] = x[i] + t * dir[i];
      fn = f(xn);
      if (std::isfinite(fn) && fn <= fx + 1e-4 * t * dir.dot(gv)) {
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (!ok) {
      if (!reset_once) {
        reset_once = true;
        hinv.setIdentity();
        continue;
      }
      return {x, fx, iter, gv.lpNorm<Eigen::Infinity>() < 1e-6};
    }
    reset_once = false;
    const Vec4 gn = gradient(xn);
    Eigen::Vector4d s, y;
    for (int i = 0; i < 4; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
    }
    x = xn;
    fx = fn;
    g = gn;
    if (s.lpNorm<Eigen::Infinity>() < step_tol) return {x, fx, iter, true};
    const double sy = s.dot(y);
    if (sy > 1e-14) {
      const double rho = 1.0 / sy;
      const Eigen::Matrix4d ident = Eigen::Matrix4d::Identity();
      hinv = (ident - rho * s * y.transpose()) * hinv * (ident - rho * y * s.transpose()) +
             rho * s * s.transpose();
    }
  }
  return {x, fx, max_iter, false};
}

}  // namespace

// ----------------------------------------------------------------------------
// Ingest

Dataset build_dataset(const std::vector<CitationRecord>& records, const IngestOptions& options) {
  if (options.year_min > options.year_max) {
    throw Error(ErrorCode::kInvalidArgument, "empty year window");
  }
  if (!(options.min_field_share >= 0.0 && options.min_field_share <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "min_field_share must lie in [0, 1]");
  }
  Dataset data;
  std::vector<const CitationRecord*> window;
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (r.year < options.year_min || r.year > options.year_max) {
      ++data.out_of_window;
      continue;
    }
    if (!seen.insert(r.id).second) {
      ++data.duplicate_ids;
      continue;
    }
    window.push_back(&r);
  }

  std::map<std::string, std::size_t> appearances;
  for (const auto* r : window) {
    std::set<std::string> names;
    for (const auto& f : r->fields) names.insert(f.name);
    for (const auto& name : names) ++appearances[name];
  }
  std::set<std::string> major;
  for (const auto& [name, count] : appearances) {
    if (static_cast<double>(count) >= options.min_field_share * static_cast<double>(window.size())) {
      major.insert(name);
    }
  }

  std::vector<const CitationRecord*> kept;
  std::vector<std::string> type_name;
  for (const auto* r : window) {
    const FieldWeight* best = nullptr;
    for (const auto& f : r->fields) {
      if (!major.count(f.name)) continue;
      if (best == nullptr || f.weight > best->weight ||
          (f.weight == best->weight && f.name < best->name)) {
        best = &f;
      }
    }
    if (best == nullptr) {
      ++data.without_major_field;
      continue;
    }
    kept.push_back(r);
    type_name.push_back(best->name);
  }
  if (kept.empty()) throw Error(ErrorCode::kEmptyDataset, "no papers left after filtering");

  data.fields.assign(type_name.begin(), type_name.end());
  std::sort(data.fields.begin(), data.fields.end());
  data.fields.erase(std::unique(data.fields.begin(), data.fields.end()), data.fields.end());

  std::unordered_map<std::string, std::uint32_t> index;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    index.emplace(kept[i]->id, static_cast<std::uint32_t>(i));
    data.ids.push_back(kept[i]->id);
    data.years.push_back(kept[i]->year);
    const auto it = std::lower_bound(data.fields.begin(), data.fields.end(), type_name[i]);
    data.field.push_back(static_cast<std::uint32_t>(it - data.fields.begin()));
  }
  data.refs.resize(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    auto& out = data.refs[i];
    for (const auto& ref : kept[i]->references) {
      const auto it = index.find(ref);
      if (it == index.end() || it->second == i) {
        ++data.dropped_references;
        continue;
      }
      out.push_back(it->second);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return data;
}

Dataset ingest(std::istream& in, const IngestOptions& options) {
  std::vector<CitationRecord> records;
  std::size_t malformed = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(parse_record(line));
    } catch (const std::exception&) {
      ++malformed;
    }
  }
  Dataset data = build_dataset(records, options);
  data.malformed_lines = malformed;
  return data;
}

Dataset ingest(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  return ingest(in, options);
}

// ----------------------------------------------------------------------------
// Clustering

std::vector<std::vector<double>> field_graph(const Dataset& data) {
  const std::size_t m = data.fields.size();
  std::vector<std::vector<double>> w(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::uint32_t j : data.refs[i]) {
      w[data.field[i]][data.field[j]] += 1.0;
      w[data.field[j]][data.field[i]] += 1.0;
    }
  }
  return w;
}

FieldClustering spectral_clustering(const std::vector<std::vector<double>>& weights,
                                    std::optional<std::uint32_t> k, std::uint64_t seed) {
  const std::size_t m = weights.size();
  if (m < 2) throw Error(ErrorCode::kInvalidArgument, "clustering needs at least 2 fields");
  for (const auto& row : weights) {
    if (row.size() != m) throw Error(ErrorCode::kInvalidArgument, "weight matrix must be square");
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (!(weights[a][b] >= 0.0) || weights[a][b] != weights[b][a]) {
        throw Error(ErrorCode::kInvalidArgument, "weights must be symmetric and non-negative");
      }
    }
  }
  if (k && (*k < 1 || *k > m)) {
    throw Error(ErrorCode::kInvalidArgument, "k must lie in [1, number of fields]");
  }

  FieldClustering out;
  const auto comp = components_of(weights);
  out.components = *std::max_element(comp.begin(), comp.end()) + 1;

  Eigen::VectorXd dinv(static_cast<Eigen::Index>(m));
  for (std::size_t a = 0; a < m; ++a) {
    double d = 0.0;
    for (double x : weights[a]) d += x;
    dinv[static_cast<Eigen::Index>(a)] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t a = 0; a < m; ++a) {
    const auto ia = static_cast<Eigen::Index>(a);
    if (dinv[ia] == 0.0) lap(ia, ia) = 0.0;
    for (std::size_t b = 0; b < m; ++b) {
      const auto ib = static_cast<Eigen::Index>(b);
      lap(ia, ib) -= dinv[ia] * weights[a][b] * dinv[ib];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNoConvergence, "eigen decomposition failed");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());

  std::uint32_t kk = 0;
  if (k) {
    kk = *k;
  } else if (out.components >= m) {
    kk = static_cast<std::uint32_t>(m);
  } else {
    double best_gap = -1.0;
    for (std::size_t i = out.components; i < m; ++i) {
      const double gap = out.eigenvalues[i] - out.eigenvalues[i - 1];
      if (gap > best_gap + 1e-12) {
        best_gap = gap;
        kk = static_cast<std::uint32_t>(i);
      }
    }
  }

  std::vector<std::uint32_t> labels;
  if (kk == out.components) {
    labels = comp;
  } else if (kk == m) {
    labels.resize(m);
    std::iota(labels.begin(), labels.end(), 0u);
  } else if (kk == 1) {
    labels.assign(m, 0);
  } else {
    Eigen::MatrixXd emb = solver.eigenvectors().leftCols(kk);
    for (Eigen::Index r = 0; r < emb.rows(); ++r) {
      const double norm = emb.row(r).norm();
      if (norm > 0.0) emb.row(r) /= norm;
    }
    labels = kmeans(emb, kk, seed);
  }
  out.cluster = canonical_labels(labels);
  out.k = *std::max_element(out.cluster.begin(), out.cluster.end()) + 1;
  return out;
}

FieldClustering cluster_fields(const Dataset& data, std::optional<std::uint32_t> k,
                               std::uint64_t seed) {
  return spectral_clustering(field_graph(data), k, seed);
}

ClusterGraph cluster_graph(const Dataset& data, const FieldClustering& clustering,
                           std::uint32_t cluster) {
  if (clustering.cluster.size() != data.fields.size()) {
    throw Error(ErrorCode::kInvalidArgument, "clustering does not match the dataset fields");
  }
  ClusterGraph out;
  std::vector<std::uint32_t> local_type(data.fields.size(), std::numeric_limits<std::uint32_t>::max());
  for (std::uint32_t f = 0; f < data.fields.size(); ++f) {
    if (clustering.cluster[f] == cluster) {
      local_type[f] = static_cast<std::uint32_t>(out.field_index.size());
      out.field_index.push_back(f);
    }
  }
  if (out.field_index.empty()) throw Error(ErrorCode::kInvalidArgument, "empty cluster");
  std::vector<std::uint32_t> local(data.size(), std::numeric_limits<std::uint32_t>::max());
  std::vector<TypeId> types;
  for (std::uint32_t i = 0; i < data.size(); ++i) {
    if (local_type[data.field[i]] == std::numeric_limits<std::uint32_t>::max()) continue;
    local[i] = static_cast<std::uint32_t>(out.paper.size());
    out.paper.push_back(i);
    types.push_back(local_type[data.field[i]]);
  }
  std::vector<std::pair<NodeId, NodeId>> arcs;
  for (std::uint32_t i : out.paper) {
    for (std::uint32_t j : data.refs[i]) {
      if (local[j] != std::numeric_limits<std::uint32_t>::max()) arcs.emplace_back(local[i], local[j]);
    }
  }
  out.graph = TypedGraph::from_pairs(std::move(types), static_cast<TypeId>(out.field_index.size()),
                                     true, arcs);
  return out;
}

// ----------------------------------------------------------------------------
// Phase assignments

DescendantGraph descendant_graph(const TypedGraph& g, NodeId u) {
  if (!g.directed()) throw Error(ErrorCode::kInvalidArgument, "citation graph must be directed");
  if (u >= g.node_count()) throw Error(ErrorCode::kInvalidArgument, "node out of range");
  DescendantGraph gu;
  gu.focal_type = g.type(u);
  const auto out = g.out_neighbors(u);
  gu.nodes.assign(out.begin(), out.end());
  gu.mediators.resize(gu.nodes.size());
  for (NodeId v : gu.nodes) gu.types.push_back(g.type(v));
  for (std::uint32_t j = 0; j < gu.nodes.size(); ++j) {
    // Sorted merge of nodes[j]'s out-neighbours with V(u).
    const auto nj = g.out_neighbors(gu.nodes[j]);
    auto a = nj.begin();
    std::uint32_t i = 0;
    while (a != nj.end() && i < gu.nodes.size()) {
      if (*a < gu.nodes[i]) {
        ++a;
      } else if (gu.nodes[i] < *a) {
        ++i;
      } else {
        gu.mediators[i].push_back(j);
        ++a;
        ++i;
      }
    }
  }
  return gu;
}

DescendantGraph make_descendant_graph(TypeId focal_type, std::vector<TypeId> types,
                                      std::span<const std::pair<std::uint32_t, std::uint32_t>> arcs) {
  DescendantGraph gu;
  gu.focal_type = focal_type;
  gu.types = std::move(types);
  gu.nodes.resize(gu.types.size());
  std::iota(gu.nodes.begin(), gu.nodes.end(), NodeId{0});
  gu.mediators.resize(gu.types.size());
  for (const auto& [from, to] : arcs) {
    if (from >= gu.size() || to >= gu.size() || from == to) {
      throw Error(ErrorCode::kInvalidArgument, "bad arc in descendant graph");
    }
    gu.mediators[to].push_back(from);
  }
  for (auto& m : gu.mediators) {
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
  }
  return gu;
}

bool is_feasible(const DescendantGraph& gu, const PhaseAssignment& phi) {
  if (phi.size() != gu.size()) throw Error(ErrorCode::kInvalidArgument, "assignment size mismatch");
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] == 1) continue;
    if (phi[i] != 2) throw Error(ErrorCode::kInvalidArgument, "phases must be 1 or 2");
    const auto& med = gu.mediators[i];
    if (std::none_of(med.begin(), med.end(), [&](std::uint32_t j) { return phi[j] == 1; })) {
      return false;
    }
  }
  return true;
}

AssignmentSet enumerate_feasible_assignments(const DescendantGraph& gu, std::uint64_t seed,
                                             const AssignmentOptions& options) {
  AssignmentSet set;
  const auto [exact, attempts] = for_each_assignment(
      gu, seed, options, [&](const PhaseAssignment& phi) { set.assignments.push_back(phi); });
  set.exact = exact;
  set.attempts = attempts;
  return set;
}

std::array<double, 4> assignment_stats(const DescendantGraph& gu, const PhaseAssignment& phi) {
  if (phi.size() != gu.size()) throw Error(ErrorCode::kInvalidArgument, "assignment size mismatch");
  std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const bool alike = gu.types[i] == gu.focal_type;
    if (phi[i] == 1) {
      c[alike ? 0 : 1] += 1.0;
      continue;
    }
    if (phi[i] != 2) throw Error(ErrorCode::kInvalidArgument, "phases must be 1 or 2");
    std::size_t similar = 0;
    std::size_t total = 0;
    for (std::uint32_t j : gu.mediators[i]) {
      if (phi[j] != 1) continue;
      ++total;
      if (gu.types[j] == gu.focal_type) ++similar;
    }
    if (total == 0) {
      throw Error(ErrorCode::kInfeasibleAssignment, "phase-2 node without a phase-1 mediator");
    }
    const double share = static_cast<double>(similar) / static_cast<double>(total);
    c[2] += share;
    c[3] += 1.0 - share;
  }
  return c;
}

// ----------------------------------------------------------------------------
// Likelihood

NodeEvidence node_evidence(const DescendantGraph& gu, std::uint64_t seed,
                           const AssignmentOptions& options) {
  std::map<std::array<double, 4>, std::uint64_t> tally;
  std::uint64_t total = 0;
  const auto [exact, attempts] =
      for_each_assignment(gu, seed, options, [&](const PhaseAssignment& phi) {
        ++tally[assignment_stats(gu, phi)];
        ++total;
      });
  (void)attempts;
  NodeEvidence e;
  e.exact = exact;
  const double log_total = std::log(static_cast<double>(total));
  for (const auto& [counts, mult] : tally) {
    e.counts.push_back(counts);
    e.log_weight.push_back(std::log(static_cast<double>(mult)) - log_total);
  }
  return e;
}

std::vector<NodeEvidence> collect_evidence(const TypedGraph& g, std::span<const NodeId> nodes,
                                           std::uint64_t seed, const AssignmentOptions& options) {
  const Rng base(seed, kAssignmentStream);
  return map_replicates(nodes.size(), [&](std::size_t i) {
    const auto gu = descendant_graph(g, nodes[i]);
    return node_evidence(gu, base.split(i).key(), options);
  });
}

double node_log_likelihood(const NodeEvidence& evidence, const Theta& theta) {
  check_theta(theta);
  if (evidence.counts.empty() || evidence.counts.size() != evidence.log_weight.size()) {
    throw Error(ErrorCode::kInvalidArgument, "empty or inconsistent node evidence");
  }
  const auto t = theta.as_array();
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(evidence.counts.size());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    double e = evidence.log_weight[k];
    for (int i = 0; i < 4; ++i) e -= evidence.counts[k][i] / t[i];
    terms[k] = e;
    peak = std::max(peak, e);
  }
  double sum = 0.0;
  for (double e : terms) sum += std::exp(e - peak);
  return peak + std::log(sum) - std::log(t[0]) - std::log(t[1]) - std::log(t[2]) - std::log(t[3]);
}

double total_log_likelihood(std::span<const NodeEvidence> evidence, const Theta& theta) {
  double total = 0.0;
  for (const auto& e : evidence) total += node_log_likelihood(e, theta);
  return total;
}

FitResult fit_theta(std::span<const NodeEvidence> evidence, const FitOptions& options) {
  if (options.starts < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one start");
  if (!(options.lower_bound > 0.0 && options.lower_bound < options.start_min &&
        options.start_min < options.start_max && options.start_max < options.upper_bound)) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < lower < start_min < start_max < upper");
  }
  FitResult result;
  result.nodes = evidence.size();
  result.usable_nodes = static_cast<std::size_t>(std::count_if(evidence.begin(), evidence.end(), is_usable));
  if (result.usable_nodes < options.min_usable_nodes) {
    throw Error(ErrorCode::kInvalidArgument,
                "only " + std::to_string(result.usable_nodes) + " usable nodes, need " +
                    std::to_string(options.min_usable_nodes));
  }

  // Canonical order makes the objective independent of the input order.
  std::vector<NodeEvidence> sorted(evidence.begin(), evidence.end());
  std::sort(sorted.begin(), sorted.end(), evidence_less);
  const double scale = 1.0 / static_cast<double>(sorted.size());
  const Transform tr{std::log(options.lower_bound), std::log(options.upper_bound)};

  auto theta_of = [&](const Vec4& x) {
    return Theta{tr.to_theta(x[0]), tr.to_theta(x[1]), tr.to_theta(x[2]), tr.to_theta(x[3])};
  };
  auto objective = [&](const Vec4& x) { return -scale * total_log_likelihood(sorted, theta_of(x)); };

  const Rng base(options.seed, kFitStream);
  double best_ll = -std::numeric_limits<double>::infinity();
  bool any_converged = false;
  const double log_min = std::log(options.start_min);
  const double log_max = std::log(options.start_max);
  for (int s = 0; s < options.starts; ++s) {
    Rng rng = base.split(static_cast<std::uint64_t>(s));
    FitStart start;
    Vec4 x{};
    std::array<double, 4> init{};
    for (int i = 0; i < 4; ++i) {
      init[i] = std::exp(log_min + rng.uniform() * (log_max - log_min));
      x[i] = tr.to_x(init[i]);
    }
    start.initial = Theta::from_array(init);
    const auto out = bfgs(objective, x, options.step_tolerance, options.max_iterations);
    start.theta = theta_of(out.x);
    start.log_likelihood = -out.f / scale;
    start.iterations = out.iterations;
    start.converged = out.converged;
    // Prefer converged starts; among those the highest likelihood.
    const bool better = (start.converged && !any_converged) ||
                        (start.converged == any_converged && start.log_likelihood > best_ll);
    if (better) {
      best_ll = start.log_likelihood;
      result.best_start = static_cast<std::size_t>(s);
      any_converged = any_converged || start.converged;
    }
    result.starts.push_back(start);
  }

  const FitStart& best = result.starts[result.best_start];
  result.theta = best.theta;
  result.log_likelihood = best.log_likelihood;
  result.converged = best.converged;
  const auto t = result.theta.as_array();
  for (int i = 0; i < 4; ++i) {
    result.at_bound[i] = t[i] < options.lower_bound * 1.01 || t[i] > options.upper_bound / 1.01;
  }
  for (int i = 0; i < 4; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& st : result.starts) {
      if (!st.converged) continue;
      lo = std::min(lo, st.theta.as_array()[i]);
      hi = std::max(hi, st.theta.as_array()[i]);
    }
    if (hi >= lo) result.start_spread = std::max(result.start_spread, (hi - lo) / t[i]);
  }
  if (!result.converged) {
    std::ostringstream msg;
    msg << "no start converged; best iterate theta=(" << t[0] << ", " << t[1] << ", " << t[2]
        << ", " << t[3] << "), log-likelihood " << result.log_likelihood;
    throw Error(ErrorCode::kNoConvergence, msg.str());
  }
  return result;
}

EquilibriumPrediction predict_equilibrium(const Theta& theta, std::uint32_t num_types) {
  if (num_types < 2) throw Error(ErrorCode::kInvalidArgument, "prediction needs K >= 2");
  for (double v : theta.as_array()) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kDomain, "theta components must be finite and non-negative");
    }
  }
  EquilibriumPrediction p;
  p.n_s = theta.n_s;
  p.n_d = theta.n_d;
  p.n_f = theta.n_fs + theta.n_fd;
  JrParams jr;
  jr.num_types = num_types;
  jr.n_s = p.n_s;
  jr.n_d = p.n_d;
  if (p.n_f > 0.0) {
    p.alpha = theta.n_fs / p.n_f;
    const double lo = 1.0 / num_types;
    if (!(p.alpha > lo && p.alpha < 1.0)) {
      p.alpha_valid = false;
      p.warnings.push_back("alpha outside (1/K, 1); the closed form is outside its range of validity");
    }
  } else {
    p.alpha = 1.0;
    p.warnings.push_back("no phase-2 links; alpha is undefined");
  }
  jr.n_f = p.n_f;
  jr.alpha = p.alpha;
  p.f_inf = equilibrium_formula(jr);
  jr.n_f = 0.0;
  p.f_inf_no_tc = equilibrium_formula(jr);
  p.tc_contribution = p.f_inf - p.f_inf_no_tc;
  return p;
}

// ----------------------------------------------------------------------------
// Synthetic data

SyntheticData generate_synthetic(const Theta& theta, std::uint32_t num_types,
                                 std::uint64_t arrivals, std::uint64_t seed,
                                 std::vector<double> type_dist) {
  check_theta(theta);
  JrParams params;
  params.num_types = num_types;
  params.type_dist = std::move(type_dist);
  params.n_s = theta.n_s;
  params.n_d = theta.n_d;
  params.n_f = theta.n_fs + theta.n_fd;
  params.alpha = theta.n_fs / params.n_f;
  params.validate(false);

  SyntheticData out;
  TypedGraph seed_graph = jr_seed_graph(params, SeedKind::kComplete, seed);
  out.first_arrival = static_cast<NodeId>(seed_graph.node_count());
  JrSimulator sim(params, std::move(seed_graph), seed);
  const Rng base(seed, kSyntheticStream);
  auto draw = [](Rng& rng, double mean) {
    return static_cast<std::uint32_t>(rng.round_stochastic(rng.exponential(mean)));
  };
  for (std::uint64_t t = 1; t <= arrivals; ++t) {
    Rng rng = base.split(t);
    ArrivalCounts counts;
    counts.similar = draw(rng, theta.n_s);
    counts.dissimilar = draw(rng, theta.n_d);
    counts.friends_similar = draw(rng, theta.n_fs);
    counts.friends_dissimilar = draw(rng, theta.n_fd);
    sim.step(counts);
  }
  out.observed_integration = sim.arrival_integration();
  out.shortfall = sim.shortfall();
  out.graph = sim.graph();
  return out;
}

// ----------------------------------------------------------------------------
// Pipeline

EstimateReport estimate(const Dataset& data, const EstimateOptions& options) {
  EstimateReport report;
  report.papers = data.size();
  report.clustering = cluster_fields(data, options.cluster_k, options.seed);
  const Rng base(options.seed, kAssignmentStream);
  for (std::uint32_t c = 0; c < report.clustering.k; ++c) {
    ClusterReport cr;
    cr.cluster = c;
    const auto cg = cluster_graph(data, report.clustering, c);
    for (std::uint32_t f : cg.field_index) cr.fields.push_back(data.fields[f]);
    const TypedGraph& g = cg.graph;
    cr.nodes = g.node_count();
    cr.citations = g.edge_count();
    std::size_t bi = 0;
    for (const auto& [a, b] : g.edges()) {
      if (g.type(a) != g.type(b)) ++bi;
    }
    if (cr.citations > 0) cr.observed_integration = static_cast<double>(bi) / cr.citations;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (g.out_neighbors(u).size() > 0) ++cr.usable_nodes;
    }
    if (cg.field_index.size() < 2) {
      cr.skipped = "single field: integration is not defined between types";
    } else if (cr.usable_nodes < options.fit.min_usable_nodes) {
      cr.skipped = "fewer than " + std::to_string(options.fit.min_usable_nodes) + " usable nodes";
    } else {
      std::vector<NodeId> nodes(g.node_count());
      std::iota(nodes.begin(), nodes.end(), NodeId{0});
      const auto evidence = collect_evidence(g, nodes, base.split(c).key(), options.assignments);
      cr.sampled_nodes = static_cast<std::size_t>(
          std::count_if(evidence.begin(), evidence.end(), [](const NodeEvidence& e) { return !e.exact; }));
      try {
        cr.fit = fit_theta(evidence, options.fit);
        cr.prediction = predict_equilibrium(cr.fit->theta, g.num_types());
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoConvergence) throw;
        cr.skipped = e.what();
      }
    }
    report.clusters.push_back(std::move(cr));
  }
  return report;
}

}  // namespace netseg
