#pragma once

// Graph kernels used as fast similarity backends for retrieval:
//   WL  Weisfeiler-Lehman subtree features over concept labels
//   SP  shortest-path (label, label, distance) triples
//   NH  neighborhood hash, Tanimoto over final node hashes
//   RW  geometric random walks on the unlabeled direct product graph
//   GS  graphlet sampling over unlabeled induced subgraphs
// Edge predicates are ignored by all of them; structure is read from the
// undirected view of each scene graph.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cfged/error.hpp"
#include "cfged/graph.hpp"
#include "cfged/matrix_io.hpp"
#include "cfged/parallel.hpp"
#include "cfged/rng.hpp"
#include "json.hpp"

namespace cfged {

enum class KernelKind { kWL, kSP, kNH, kRW, kGS };

inline std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::kWL: return "WL";
    case KernelKind::kSP: return "SP";
    case KernelKind::kNH: return "NH";
    case KernelKind::kRW: return "RW";
    case KernelKind::kGS: return "GS";
  }
  return "?";
}

inline KernelKind parse_kernel_kind(std::string_view s) {
  std::string up(s);
  for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "WL") return KernelKind::kWL;
  if (up == "SP") return KernelKind::kSP;
  if (up == "NH") return KernelKind::kNH;
  if (up == "RW") return KernelKind::kRW;
  if (up == "GS") return KernelKind::kGS;
  throw Error(ErrorKind::kSpec, "unknown kernel '" + std::string(s) + "'");
}

struct KernelConfig {
  KernelKind kind = KernelKind::kWL;
  int wl_iterations = 3;
  int nh_iterations = 2;
  int nh_bits = 32;
  // Unset: min(0.01, 0.5 / (d1 * d2)) with d the maximum degree; a Gram
  // matrix uses the dataset-wide maximum degree so one lambda serves all
  // pairs.
  std::optional<double> rw_lambda;
  int gs_graphlet_size = 4;
  int gs_samples = 500;
  std::uint64_t gs_seed = 0;

  void validate() const {
    if (wl_iterations < 1)
      throw Error(ErrorKind::kSpec, "wl_iterations must be >= 1");
    if (nh_iterations < 0)
      throw Error(ErrorKind::kSpec, "nh_iterations must be >= 0");
    if (nh_bits != 16 && nh_bits != 32 && nh_bits != 64)
      throw Error(ErrorKind::kSpec, "nh_bits must be 16, 32 or 64");
    if (rw_lambda && !(*rw_lambda > 0.0))
      throw Error(ErrorKind::kSpec, "rw_lambda must be positive");
    if (gs_graphlet_size < 3 || gs_graphlet_size > 5)
      throw Error(ErrorKind::kSpec, "gs_graphlet_size must be 3, 4 or 5");
    if (gs_samples < 1) throw Error(ErrorKind::kSpec, "gs_samples must be >= 1");
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = to_string(kind);
    j["wl_iterations"] = wl_iterations;
    j["nh_iterations"] = nh_iterations;
    j["nh_bits"] = nh_bits;
    j["rw_lambda"] = rw_lambda ? nlohmann::ordered_json(*rw_lambda)
                               : nlohmann::ordered_json("auto");
    j["gs_graphlet_size"] = gs_graphlet_size;
    j["gs_samples"] = gs_samples;
    j["gs_seed"] = gs_seed;
    return j;
  }
};

// Sparse feature vector sorted by key.
using SparseFeatures = std::vector<std::pair<std::uint64_t, double>>;

inline double dot(const SparseFeatures& a, const SparseFeatures& b) {
  double s = 0.0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      s += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return s;
}

namespace detail {

inline SparseFeatures to_sparse(const std::map<std::uint64_t, double>& counts) {
  return SparseFeatures(counts.begin(), counts.end());
}

// Undirected neighbor lists with edge multiplicity; a self-loop lists its
// node twice.
inline std::vector<std::vector<int>> undirected_neighbors(const SceneGraph& g) {
  const auto pos = node_positions(g);
  std::vector<std::vector<int>> nbrs(g.nodes.size());
  for (const auto& e : g.edges) {
    const int s = static_cast<int>(pos.at(e.source));
    const int t = static_cast<int>(pos.at(e.target));
    nbrs[s].push_back(t);
    nbrs[t].push_back(s);
  }
  return nbrs;
}

// Simple undirected adjacency: no multiplicity, no self-loops.
inline std::vector<std::vector<char>> simple_adjacency(const SceneGraph& g) {
  const auto pos = node_positions(g);
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& e : g.edges) {
    const auto s = pos.at(e.source);
    const auto t = pos.at(e.target);
    if (s == t) continue;
    adj[s][t] = adj[t][s] = 1;
  }
  return adj;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Weisfeiler-Lehman

// Injective map from WL signatures to compact labels shared by every graph
// compared under it. Append-only; concurrent inserts of the same signature
// keep the first id, and any assignment order gives the same kernel values.
class WlLabelTable {
 public:
  std::uint32_t id(const std::string& signature) {
    {
      std::shared_lock lock(mutex_);
      auto it = ids_.find(signature);
      if (it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] =
        ids_.emplace(signature, static_cast<std::uint32_t>(ids_.size()));
    return it->second;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return ids_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// Concatenated per-iteration label histograms; key = (iteration << 32) | label.
inline SparseFeatures wl_features(const SceneGraph& g, int iterations,
                                  WlLabelTable& table) {
  const auto nbrs = detail::undirected_neighbors(g);
  const std::size_t n = g.nodes.size();
  std::vector<std::uint32_t> label(n);
  std::map<std::uint64_t, double> counts;
  for (std::size_t v = 0; v < n; ++v) {
    label[v] = table.id("0|" + g.nodes[v].concept_name);
    counts[label[v]] += 1.0;
  }
  std::vector<std::uint32_t> next(n);
  for (int it = 1; it <= iterations; ++it) {
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::uint32_t> around;
      around.reserve(nbrs[v].size());
      for (int u : nbrs[v]) around.push_back(label[u]);
      std::sort(around.begin(), around.end());
      std::string sig = std::to_string(it) + "|" + std::to_string(label[v]) + "|";
      for (auto l : around) sig += std::to_string(l) + ",";
      next[v] = table.id(sig);
      counts[(static_cast<std::uint64_t>(it) << 32) | next[v]] += 1.0;
    }
    label.swap(next);
  }
  return detail::to_sparse(counts);
}

// Same refinement with content hashes instead of a shared table, so the
// feature keys of a graph do not depend on which other graphs were seen.
// Used for fixed-width feature-hashed embeddings.
inline SparseFeatures wl_feature_hashes(const SceneGraph& g, int iterations) {
  const auto nbrs = detail::undirected_neighbors(g);
  const std::size_t n = g.nodes.size();
  std::vector<std::uint64_t> label(n);
  std::map<std::uint64_t, double> counts;
  for (std::size_t v = 0; v < n; ++v) {
    label[v] = hash_string(g.nodes[v].concept_name);
    counts[hash_combine(0, label[v])] += 1.0;
  }
  std::vector<std::uint64_t> next(n);
  for (int it = 1; it <= iterations; ++it) {
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::uint64_t> around;
      for (int u : nbrs[v]) around.push_back(label[u]);
      std::sort(around.begin(), around.end());
      std::uint64_t h = hash_combine(label[v], around.size());
      for (auto l : around) h = hash_combine(h, l);
      next[v] = h;
      counts[hash_combine(static_cast<std::uint64_t>(it), h)] += 1.0;
    }
    label.swap(next);
  }
  return detail::to_sparse(counts);
}

inline double wl_kernel(const SceneGraph& g1, const SceneGraph& g2,
                        const KernelConfig& cfg) {
  WlLabelTable table;
  return dot(wl_features(g1, cfg.wl_iterations, table),
             wl_features(g2, cfg.wl_iterations, table));
}

// ---------------------------------------------------------------------------
// Shortest path

// Counts of (label, label, hop distance) over unordered reachable node pairs
// at distance >= 1; label pairs are order-normalized.
inline SparseFeatures sp_features(const SceneGraph& g) {
  const auto adj = detail::simple_adjacency(g);
  const std::size_t n = g.nodes.size();
  std::map<std::uint64_t, double> counts;
  std::vector<int> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < n; ++v)
        if (adj[u][v] && dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
    }
    for (std::size_t t = s + 1; t < n; ++t) {
      if (dist[t] <= 0) continue;
      std::string a = g.nodes[s].concept_name;
      std::string b = g.nodes[t].concept_name;
      if (b < a) std::swap(a, b);
      std::uint64_t key = hash_combine(hash_string(a), hash_string(b));
      key = hash_combine(key, static_cast<std::uint64_t>(dist[t]));
      counts[key] += 1.0;
    }
  }
  return detail::to_sparse(counts);
}

inline double sp_kernel(const SceneGraph& g1, const SceneGraph& g2,
                        const KernelConfig& /*cfg*/) {
  return dot(sp_features(g1), sp_features(g2));
}

// ---------------------------------------------------------------------------
// Neighborhood hash

inline std::uint64_t nh_mask(int bits) {
  return bits == 64 ? ~0ULL : ((1ULL << bits) - 1);
}

// Sorted multiset of final node hashes after `iterations` rounds of
// h(v) <- ROT1(h(v)) XOR (XOR of distinct neighbor hashes).
inline std::vector<std::uint64_t> nh_hashes(const SceneGraph& g, int iterations,
                                            int bits) {
  const std::uint64_t mask = nh_mask(bits);
  const auto adj = detail::simple_adjacency(g);
  const std::size_t n = g.nodes.size();
  std::vector<std::uint64_t> h(n), next(n);
  for (std::size_t v = 0; v < n; ++v) h[v] = hash_string(g.nodes[v].concept_name, 0) & mask;
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t v = 0; v < n; ++v) {
      std::uint64_t x = ((h[v] << 1) | (h[v] >> (bits - 1))) & mask;
      for (std::size_t u = 0; u < n; ++u)
        if (adj[v][u]) x ^= h[u];
      next[v] = x;
    }
    h.swap(next);
  }
  std::sort(h.begin(), h.end());
  return h;
}

// |common| / (n1 + n2 - |common|) over sorted hash multisets.
inline double tanimoto(const std::vector<std::uint64_t>& a,
                       const std::vector<std::uint64_t>& b) {
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t denom = a.size() + b.size() - common;
  return denom == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(denom);
}

inline double nh_kernel(const SceneGraph& g1, const SceneGraph& g2,
                        const KernelConfig& cfg) {
  return tanimoto(nh_hashes(g1, cfg.nh_iterations, cfg.nh_bits),
                  nh_hashes(g2, cfg.nh_iterations, cfg.nh_bits));
}

// ---------------------------------------------------------------------------
// Random walk

// Symmetric adjacency with edge multiplicity (self-loops on the diagonal).
inline Eigen::MatrixXd rw_adjacency(const SceneGraph& g) {
  const auto pos = node_positions(g);
  const auto n = static_cast<Eigen::Index>(g.nodes.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges) {
    const auto s = static_cast<Eigen::Index>(pos.at(e.source));
    const auto t = static_cast<Eigen::Index>(pos.at(e.target));
    a(s, t) += 1.0;
    if (s != t) a(t, s) += 1.0;
  }
  return a;
}

inline double max_degree(const Eigen::MatrixXd& adjacency) {
  return adjacency.size() == 0 ? 0.0 : adjacency.rowwise().sum().maxCoeff();
}

inline double default_rw_lambda(double d1, double d2) {
  const double prod = d1 * d2;
  return prod > 0.0 ? std::min(0.01, 0.5 / prod) : 0.01;
}

// sum((I - lambda A1 (x) A2)^-1 1) - n1 n2, i.e. sum over walk lengths >= 1
// of lambda^k 1' Ax^k 1. Solved by conjugate gradients; the Kronecker product
// is applied as X -> A2 X A1 without being formed.
inline double rw_kernel_from_adjacency(const Eigen::MatrixXd& a1,
                                       const Eigen::MatrixXd& a2, double lambda) {
  const double d1 = max_degree(a1);
  const double d2 = max_degree(a2);
  if (d1 == 0.0 || d2 == 0.0) return 0.0;
  if (!(lambda * d1 * d2 < 1.0))
    throw Error(ErrorKind::kDivergence,
                "random-walk lambda " + format_double(lambda) +
                    " diverges; need lambda < " + format_double(1.0 / (d1 * d2)));
  const auto n1 = a1.rows();
  const auto n2 = a2.rows();
  auto apply = [&](const Eigen::MatrixXd& x) -> Eigen::MatrixXd {
    return x - lambda * (a2 * x * a1);
  };
  const Eigen::MatrixXd b = Eigen::MatrixXd::Ones(n2, n1);
  Eigen::MatrixXd x = b;
  Eigen::MatrixXd r = b - apply(x);
  Eigen::MatrixXd p = r;
  double rs = r.squaredNorm();
  const double stop = 1e-28 * b.squaredNorm();
  for (int it = 0; it < 10 * static_cast<int>(n1 * n2) + 100 && rs > stop; ++it) {
    const Eigen::MatrixXd ap = apply(p);
    const double alpha = rs / p.cwiseProduct(ap).sum();
    x += alpha * p;
    r -= alpha * ap;
    const double rs_next = r.squaredNorm();
    p = r + (rs_next / rs) * p;
    rs = rs_next;
  }
  return x.sum() - static_cast<double>(n1 * n2);
}

inline double rw_kernel(const SceneGraph& g1, const SceneGraph& g2,
                        const KernelConfig& cfg) {
  const Eigen::MatrixXd a1 = rw_adjacency(g1);
  const Eigen::MatrixXd a2 = rw_adjacency(g2);
  const double lambda =
      cfg.rw_lambda.value_or(default_rw_lambda(max_degree(a1), max_degree(a2)));
  return rw_kernel_from_adjacency(a1, a2, lambda);
}

// ---------------------------------------------------------------------------
// Graphlet sampling

// Isomorphism classes of simple undirected graphs on k nodes, k in [3, 5].
// Adjacency is a bitmask over the k(k-1)/2 node pairs.
class GraphletClasses {
 public:
  explicit GraphletClasses(int k) : k_(k) {
    const int pairs = k * (k - 1) / 2;
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    std::vector<std::vector<int>> perms;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<std::uint32_t> canon(1u << pairs);
    std::map<std::uint32_t, int> class_of;
    for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
      std::uint32_t best = ~0u;
      for (const auto& p : perms) {
        std::uint32_t relabeled = 0;
        for (int i = 0; i < k; ++i)
          for (int j = i + 1; j < k; ++j)
            if (mask & (1u << pair_bit(i, j))) relabeled |= 1u << pair_bit(p[i], p[j]);
        best = std::min(best, relabeled);
      }
      canon[mask] = best;
      class_of.emplace(best, 0);
    }
    int next = 0;
    for (auto& [code, idx] : class_of) idx = next++;
    class_count_ = next;
    index_.resize(canon.size());
    for (std::size_t mask = 0; mask < canon.size(); ++mask)
      index_[mask] = class_of.at(canon[mask]);
  }

  int size() const { return k_; }
  int class_count() const { return class_count_; }
  // Index reserved for graphs with fewer than k nodes.
  int degenerate_class() const { return class_count_; }
  int class_of(std::uint32_t mask) const { return index_[mask]; }

  int pair_bit(int i, int j) const {
    if (i > j) std::swap(i, j);
    // Row-major position of (i, j), i < j, in the strict upper triangle.
    return i * k_ - i * (i + 1) / 2 + (j - i - 1);
  }

 private:
  int k_;
  int class_count_ = 0;
  std::vector<int> index_;
};

inline const GraphletClasses& graphlet_classes(int k) {
  static const GraphletClasses k3(3), k4(4), k5(5);
  switch (k) {
    case 3: return k3;
    case 4: return k4;
    case 5: return k5;
  }
  throw Error(ErrorKind::kSpec, "graphlet size must be 3, 4 or 5");
}

inline std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    if (r > UINT64_MAX / num) return UINT64_MAX;
    r = r * num / i;
  }
  return r;
}

// Normalized graphlet-class distribution; exhaustive when C(n, k) <= samples,
// otherwise `samples` uniform k-subsets drawn under `seed`.
inline std::vector<double> graphlet_distribution(const SceneGraph& g, int k,
                                                 int samples, std::uint64_t seed) {
  const auto& classes = graphlet_classes(k);
  std::vector<double> dist(classes.class_count() + 1, 0.0);
  const std::size_t n = g.nodes.size();
  if (n < static_cast<std::size_t>(k)) {
    dist[classes.degenerate_class()] = 1.0;
    return dist;
  }
  const auto adj = detail::simple_adjacency(g);
  auto tally = [&](const std::vector<std::size_t>& subset) {
    std::uint32_t mask = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (adj[subset[i]][subset[j]]) mask |= 1u << classes.pair_bit(i, j);
    dist[classes.class_of(mask)] += 1.0;
  };

  std::vector<std::size_t> subset(k);
  double draws = 0.0;
  if (binomial_saturating(n, k) <= static_cast<std::uint64_t>(samples)) {
    for (int i = 0; i < k; ++i) subset[i] = i;
    while (true) {
      tally(subset);
      draws += 1.0;
      int i = k - 1;
      while (i >= 0 && subset[i] == n - k + i) --i;
      if (i < 0) break;
      ++subset[i];
      for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
  } else {
    SplitMix64 rng(seed);
    std::vector<std::size_t> pool(n);
    for (int s = 0; s < samples; ++s) {
      for (std::size_t i = 0; i < n; ++i) pool[i] = i;
      for (int i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(pool[i], pool[j]);
        subset[i] = pool[i];
      }
      tally(subset);
      draws += 1.0;
    }
  }
  for (auto& d : dist) d /= draws;
  return dist;
}

inline double gs_kernel(const SceneGraph& g1, const SceneGraph& g2,
                        const KernelConfig& cfg) {
  const auto a = graphlet_distribution(g1, cfg.gs_graphlet_size, cfg.gs_samples, cfg.gs_seed);
  const auto b = graphlet_distribution(g2, cfg.gs_graphlet_size, cfg.gs_samples, cfg.gs_seed);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// ---------------------------------------------------------------------------

inline double kernel(const SceneGraph& g1, const SceneGraph& g2,
                     const KernelConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case KernelKind::kWL: return wl_kernel(g1, g2, cfg);
    case KernelKind::kSP: return sp_kernel(g1, g2, cfg);
    case KernelKind::kNH: return nh_kernel(g1, g2, cfg);
    case KernelKind::kRW: return rw_kernel(g1, g2, cfg);
    case KernelKind::kGS: return gs_kernel(g1, g2, cfg);
  }
  return 0.0;
}

struct GramMatrix {
  std::vector<std::string> graph_ids;
  Eigen::MatrixXd values;
  bool normalized = false;
  KernelConfig config;

  LabeledMatrix labeled() const { return {graph_ids, values}; }
};

// k(i, j) / sqrt(k(i, i) k(j, j)); 0 where a self-similarity is 0. The
// diagonal is set to exactly 1.
inline void normalize_gram(Eigen::MatrixXd& k) {
  const Eigen::VectorXd diag = k.diagonal();
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      if (i == j) continue;
      const double d = diag(i) * diag(j);
      k(i, j) = d > 0.0 ? k(i, j) / std::sqrt(d) : 0.0;
    }
  k.diagonal().setOnes();
}

// Pairwise kernel values over a dataset. Per-graph features are built once;
// pairs of the upper triangle are evaluated in parallel and mirrored.
inline GramMatrix gram(const LabeledDataset& ds, KernelConfig cfg, bool normalize,
                       unsigned workers = 0) {
  cfg.validate();
  const std::size_t n = ds.size();
  GramMatrix out;
  for (const auto& g : ds.graphs()) out.graph_ids.push_back(g.id);
  out.values = Eigen::MatrixXd::Zero(n, n);
  out.normalized = normalize;

  std::function<double(std::size_t, std::size_t)> pair_value;
  std::vector<SparseFeatures> sparse(n);
  std::vector<std::vector<std::uint64_t>> hashes(n);
  std::vector<std::vector<double>> dense(n);
  std::vector<Eigen::MatrixXd> adjacency(n);
  double lambda = 0.0;
  WlLabelTable table;

  switch (cfg.kind) {
    case KernelKind::kWL:
      parallel_for(n, workers, [&](std::size_t i) {
        sparse[i] = wl_features(ds[i], cfg.wl_iterations, table);
      });
      pair_value = [&](std::size_t i, std::size_t j) { return dot(sparse[i], sparse[j]); };
      break;
    case KernelKind::kSP:
      parallel_for(n, workers, [&](std::size_t i) { sparse[i] = sp_features(ds[i]); });
      pair_value = [&](std::size_t i, std::size_t j) { return dot(sparse[i], sparse[j]); };
      break;
    case KernelKind::kNH:
      parallel_for(n, workers, [&](std::size_t i) {
        hashes[i] = nh_hashes(ds[i], cfg.nh_iterations, cfg.nh_bits);
      });
      pair_value = [&](std::size_t i, std::size_t j) { return tanimoto(hashes[i], hashes[j]); };
      break;
    case KernelKind::kGS:
      parallel_for(n, workers, [&](std::size_t i) {
        dense[i] = graphlet_distribution(ds[i], cfg.gs_graphlet_size, cfg.gs_samples,
                                         cfg.gs_seed);
      });
      pair_value = [&](std::size_t i, std::size_t j) {
        double s = 0.0;
        for (std::size_t c = 0; c < dense[i].size(); ++c) s += dense[i][c] * dense[j][c];
        return s;
      };
      break;
    case KernelKind::kRW: {
      double dmax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        adjacency[i] = rw_adjacency(ds[i]);
        dmax = std::max(dmax, max_degree(adjacency[i]));
      }
      lambda = cfg.rw_lambda.value_or(default_rw_lambda(dmax, dmax));
      out.config.rw_lambda = lambda;
      pair_value = [&](std::size_t i, std::size_t j) {
        return rw_kernel_from_adjacency(adjacency[i], adjacency[j], lambda);
      };
      break;
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);
  parallel_for(pairs.size(), workers, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    try {
      const double v = pair_value(i, j);
      out.values(i, j) = v;
      out.values(j, i) = v;
    } catch (const Error& e) {
      throw Error(e.kind(), "pair ('" + out.graph_ids[i] + "', '" + out.graph_ids[j] +
                                "'): " + e.message());
    }
  });
  if (normalize) normalize_gram(out.values);
  const auto resolved_lambda = out.config.rw_lambda;
  out.config = cfg;
  if (cfg.kind == KernelKind::kRW) out.config.rw_lambda = resolved_lambda;
  return out;
}

}  // namespace cfged
