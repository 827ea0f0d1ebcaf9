#pragma once

// Graph edit distance between scene graphs under taxonomy-derived costs.
//
// Both solvers share one notion of "cost of a node mapping": node edits come
// straight from the mapping; every ordered node pair (a, b) of the source is
// paired with (f(a), f(b)) in the target and their parallel-edge predicate
// multisets are matched optimally (substitute, delete, insert). approx_ged
// obtains the mapping from one bipartite assignment; exact_ged searches all
// mappings by branch and bound. The approximate value is therefore always the
// cost of a feasible edit path, hence an upper bound on the exact one.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cfged/edit_path.hpp"
#include "cfged/error.hpp"
#include "cfged/graph.hpp"
#include "cfged/lap.hpp"
#include "cfged/matrix_io.hpp"
#include "cfged/parallel.hpp"
#include "cfged/taxonomy.hpp"

namespace cfged {

inline constexpr double kCostTolerance = 1e-9;
inline constexpr std::size_t kDefaultNodeBudget = 10;

// Scene graph with concept labels resolved to taxonomy indices.
class IndexedGraph {
 public:
  struct Edge {
    int source;
    int target;
    int label;
  };

  IndexedGraph(const SceneGraph& g, const CostModel& cm) : graph_(&g) {
    const auto pos = node_positions(g);
    labels_.reserve(g.nodes.size());
    for (const auto& n : g.nodes) labels_.push_back(cm.concept_index(n.concept_name));
    incident_.resize(g.nodes.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto& re = g.edges[e];
      Edge edge{static_cast<int>(pos.at(re.source)),
                static_cast<int>(pos.at(re.target)),
                cm.concept_index(re.predicate)};
      edges_.push_back(edge);
      // A self-loop touches its node at both ends.
      incident_[edge.source].push_back(edge.label);
      incident_[edge.target].push_back(edge.label);
      auto [it, fresh] = groups_.try_emplace({edge.source, edge.target});
      if (fresh) group_order_.push_back({edge.source, edge.target});
      it->second.push_back(static_cast<int>(e));
    }
  }

  const SceneGraph& graph() const { return *graph_; }
  std::size_t node_count() const { return labels_.size(); }
  int label(std::size_t node) const { return labels_[node]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& incident_labels(std::size_t node) const {
    return incident_[node];
  }
  // Edge indices from `source` to `target`, in file order.
  const std::vector<int>& group(int source, int target) const {
    static const std::vector<int> kEmpty;
    auto it = groups_.find({source, target});
    return it == groups_.end() ? kEmpty : it->second;
  }
  // Ordered node pairs carrying at least one edge, by first appearance.
  const std::vector<std::pair<int, int>>& group_order() const {
    return group_order_;
  }

  NodeRef node_ref(std::size_t node) const {
    const auto& n = graph_->nodes[node];
    return {n.node_id, n.concept_name};
  }
  EdgeRef edge_ref(std::size_t edge) const {
    const auto& e = graph_->edges[edge];
    return {e.source, e.target, e.predicate};
  }

 private:
  const SceneGraph* graph_;
  std::vector<int> labels_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
  std::map<std::pair<int, int>, std::vector<int>> groups_;
  std::vector<std::pair<int, int>> group_order_;
};

// Optimal matching of two label multisets under substitution / deletion /
// insertion costs. `pairs` holds (index in a or -1, index in b or -1).
struct LabelMatching {
  std::vector<std::pair<int, int>> pairs;
  double cost = 0.0;
};

inline LabelMatching match_labels(const std::vector<int>& a,
                                  const std::vector<int>& b,
                                  const CostModel& cm) {
  LabelMatching out;
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  if (m == 0 || n == 0) {
    for (int i = 0; i < m; ++i) {
      out.pairs.emplace_back(i, -1);
      out.cost += cm.deletion(a[i]);
    }
    for (int j = 0; j < n; ++j) {
      out.pairs.emplace_back(-1, j);
      out.cost += cm.insertion(b[j]);
    }
    return out;
  }
  if (m == 1 && n == 1) {
    const double sub = cm.substitution(a[0], b[0]);
    const double del_ins = cm.deletion(a[0]) + cm.insertion(b[0]);
    if (sub <= del_ins) {
      out.pairs.emplace_back(0, 0);
      out.cost = sub;
    } else {
      out.pairs = {{0, -1}, {-1, 0}};
      out.cost = del_ins;
    }
    return out;
  }
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m + n, m + n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = cm.substitution(a[i], b[j]);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) c(i, n + k) = i == k ? cm.deletion(a[i]) : kForbiddenCost;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) c(m + j, k) = j == k ? cm.insertion(b[j]) : kForbiddenCost;
  const LapResult lap = solve_lap(c);
  for (int i = 0; i < m; ++i) {
    const int col = lap.row_to_col[i];
    if (col < n) {
      out.pairs.emplace_back(i, col);
      out.cost += c(i, col);
    } else {
      out.pairs.emplace_back(i, -1);
      out.cost += cm.deletion(a[i]);
    }
  }
  for (int j = 0; j < n; ++j) {
    const int col = lap.row_to_col[m + j];
    if (col < n) {
      out.pairs.emplace_back(-1, col);
      out.cost += cm.insertion(b[col]);
    }
  }
  return out;
}

inline double label_matching_cost(const std::vector<int>& a,
                                  const std::vector<int>& b,
                                  const CostModel& cm) {
  return match_labels(a, b, cm).cost;
}

// Node mapping: mapping[u] = target node of source node u, or -1 (deleted).
using NodeMapping = std::vector<int>;

// Weight of incident-edge terms in the node cost matrix; every edge is seen
// from both of its endpoints.
inline constexpr double kIncidentEdgeWeight = 0.5;

inline Eigen::MatrixXd bipartite_cost_matrix(const IndexedGraph& g1,
                                             const IndexedGraph& g2,
                                             const CostModel& cm) {
  const int n1 = static_cast<int>(g1.node_count());
  const int n2 = static_cast<int>(g2.node_count());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);

  auto label_sum = [&](const std::vector<int>& labels) {
    double s = 0.0;
    for (int l : labels) s += cm.deletion(l);
    return s;
  };

  for (int u = 0; u < n1; ++u)
    for (int v = 0; v < n2; ++v)
      c(u, v) = cm.substitution(g1.label(u), g2.label(v)) +
                kIncidentEdgeWeight * label_matching_cost(g1.incident_labels(u),
                                                          g2.incident_labels(v), cm);
  for (int u = 0; u < n1; ++u) {
    const double del = cm.deletion(g1.label(u)) +
                       kIncidentEdgeWeight * label_sum(g1.incident_labels(u));
    for (int k = 0; k < n1; ++k) c(u, n2 + k) = u == k ? del : kForbiddenCost;
  }
  for (int v = 0; v < n2; ++v) {
    const double ins = cm.insertion(g2.label(v)) +
                       kIncidentEdgeWeight * label_sum(g2.incident_labels(v));
    for (int k = 0; k < n2; ++k) c(n1 + v, k) = v == k ? ins : kForbiddenCost;
  }
  return c;
}

// Square (n1 + n2) node cost matrix: substitutions top-left, deletions on
// the top-right diagonal, insertions on the bottom-left diagonal, zeros
// bottom-right, kForbiddenCost elsewhere.
inline Eigen::MatrixXd build_bipartite_cost_matrix(const SceneGraph& g1,
                                                   const SceneGraph& g2,
                                                   const CostModel& cm) {
  return bipartite_cost_matrix(IndexedGraph(g1, cm), IndexedGraph(g2, cm), cm);
}

// Materializes the edit path induced by a node mapping.
inline EditPath edit_path_for_mapping(const IndexedGraph& g1,
                                      const IndexedGraph& g2,
                                      const NodeMapping& mapping,
                                      const CostModel& cm) {
  const std::size_t n1 = g1.node_count();
  const std::size_t n2 = g2.node_count();
  EditPath path;
  std::vector<char> matched(n2, 0);

  for (std::size_t u = 0; u < n1; ++u) {
    const int v = mapping[u];
    if (v < 0) {
      path.ops.push_back(EditOp::delete_node(g1.node_ref(u), cm.deletion(g1.label(u))));
      continue;
    }
    matched[v] = 1;
    path.node_map.emplace_back(g1.node_ref(u).id, g2.node_ref(v).id);
    if (g1.label(u) != g2.label(v))
      path.ops.push_back(EditOp::replace_node(
          g1.node_ref(u), g2.node_ref(v), cm.substitution(g1.label(u), g2.label(v))));
  }
  for (std::size_t v = 0; v < n2; ++v)
    if (!matched[v])
      path.ops.push_back(EditOp::insert_node(g2.node_ref(v), cm.insertion(g2.label(v))));

  auto labels_of = [](const IndexedGraph& g, const std::vector<int>& edge_ids) {
    std::vector<int> labels;
    labels.reserve(edge_ids.size());
    for (int e : edge_ids) labels.push_back(g.edges()[e].label);
    return labels;
  };

  std::map<std::pair<int, int>, char> consumed;
  for (const auto& [a, b] : g1.group_order()) {
    const auto& ids1 = g1.group(a, b);
    const int x = mapping[a];
    const int y = mapping[b];
    if (x < 0 || y < 0) {
      for (int e : ids1)
        path.ops.push_back(EditOp::delete_edge(g1.edge_ref(e),
                                               cm.deletion(g1.edges()[e].label)));
      continue;
    }
    consumed[{x, y}] = 1;
    const auto& ids2 = g2.group(x, y);
    const auto match = match_labels(labels_of(g1, ids1), labels_of(g2, ids2), cm);
    for (const auto& [i, j] : match.pairs) {
      if (i >= 0 && j >= 0) {
        const int e1 = ids1[i];
        const int e2 = ids2[j];
        const int l1 = g1.edges()[e1].label;
        const int l2 = g2.edges()[e2].label;
        if (l1 != l2)
          path.ops.push_back(EditOp::replace_edge(g1.edge_ref(e1), g2.edge_ref(e2),
                                                  cm.substitution(l1, l2)));
      } else if (i >= 0) {
        path.ops.push_back(EditOp::delete_edge(g1.edge_ref(ids1[i]),
                                               cm.deletion(g1.edges()[ids1[i]].label)));
      } else {
        path.ops.push_back(EditOp::insert_edge(g2.edge_ref(ids2[j]),
                                               cm.insertion(g2.edges()[ids2[j]].label)));
      }
    }
  }
  for (const auto& key : g2.group_order()) {
    if (consumed.count(key)) continue;
    for (int e : g2.group(key.first, key.second))
      path.ops.push_back(EditOp::insert_edge(g2.edge_ref(e),
                                             cm.insertion(g2.edges()[e].label)));
  }
  path.total_cost = sum_op_costs(path);
  return path;
}

struct GedResult {
  double cost = 0.0;
  EditPath path;
  NodeMapping mapping;
};

// Total edit cost of a node mapping, without materializing the path.
inline double mapping_cost(const IndexedGraph& g1, const IndexedGraph& g2,
                           const NodeMapping& mapping, const CostModel& cm) {
  const int n2 = static_cast<int>(g2.node_count());
  std::vector<char> matched(n2, 0);
  double c = 0.0;
  for (std::size_t u = 0; u < mapping.size(); ++u) {
    const int v = mapping[u];
    if (v < 0) {
      c += cm.deletion(g1.label(u));
    } else {
      matched[v] = 1;
      c += cm.substitution(g1.label(u), g2.label(v));
    }
  }
  for (int v = 0; v < n2; ++v)
    if (!matched[v]) c += cm.insertion(g2.label(v));

  auto labels_of = [](const IndexedGraph& g, const std::vector<int>& edge_ids) {
    std::vector<int> labels;
    labels.reserve(edge_ids.size());
    for (int e : edge_ids) labels.push_back(g.edges()[e].label);
    return labels;
  };
  std::vector<int> preimage(n2, -1);
  for (std::size_t u = 0; u < mapping.size(); ++u)
    if (mapping[u] >= 0) preimage[mapping[u]] = static_cast<int>(u);
  for (const auto& [a, b] : g1.group_order()) {
    const int x = mapping[a];
    const int y = mapping[b];
    const auto l1 = labels_of(g1, g1.group(a, b));
    c += x < 0 || y < 0 ? label_matching_cost(l1, {}, cm)
                        : label_matching_cost(l1, labels_of(g2, g2.group(x, y)), cm);
  }
  for (const auto& [x, y] : g2.group_order()) {
    const int a = preimage[x];
    const int b = preimage[y];
    if (a >= 0 && b >= 0 && !g1.group(a, b).empty()) continue;
    c += label_matching_cost({}, labels_of(g2, g2.group(x, y)), cm);
  }
  return c;
}

namespace detail {

inline NodeMapping mapping_from_assignment(const std::vector<int>& row_to_col, int n1,
                                           int n2) {
  NodeMapping mapping(n1, -1);
  for (int u = 0; u < n1; ++u)
    if (row_to_col[u] < n2) mapping[u] = row_to_col[u];
  return mapping;
}

// Greedy pairwise swaps over the assignment. Only swaps that leave the
// cost-matrix objective unchanged are tried; one is kept when it lowers the
// true edit cost.
inline NodeMapping refine_by_swaps(const IndexedGraph& g1, const IndexedGraph& g2,
                                   const CostModel& cm, const Eigen::MatrixXd& c,
                                   std::vector<int> row_to_col, double& cost) {
  const int n1 = static_cast<int>(g1.node_count());
  const int n2 = static_cast<int>(g2.node_count());
  const int n = n1 + n2;
  NodeMapping best = mapping_from_assignment(row_to_col, n1, n2);
  if (cost <= kCostTolerance) return best;
  for (int pass = 0; pass < n; ++pass) {
    bool improved = false;
    for (int i = 0; i < n1 && cost > kCostTolerance; ++i)
      for (int j = i + 1; j < n; ++j) {
        const int a = row_to_col[i];
        const int b = row_to_col[j];
        if (c(i, b) >= kForbiddenCost || c(j, a) >= kForbiddenCost) continue;
        const double delta = c(i, b) + c(j, a) - c(i, a) - c(j, b);
        if (std::abs(delta) > kCostTolerance) continue;
        std::swap(row_to_col[i], row_to_col[j]);
        NodeMapping trial = mapping_from_assignment(row_to_col, n1, n2);
        const double trial_cost = mapping_cost(g1, g2, trial, cm);
        if (trial_cost < cost - kCostTolerance) {
          cost = trial_cost;
          best = std::move(trial);
          improved = true;
        } else {
          std::swap(row_to_col[i], row_to_col[j]);
        }
      }
    if (!improved) break;
  }
  return best;
}

}  // namespace detail

inline GedResult approx_ged(const IndexedGraph& g1, const IndexedGraph& g2,
                            const CostModel& cm) {
  const int n1 = static_cast<int>(g1.node_count());
  const int n2 = static_cast<int>(g2.node_count());
  const Eigen::MatrixXd c = bipartite_cost_matrix(g1, g2, cm);
  const LapResult lap = solve_lap(c);
  NodeMapping mapping = detail::mapping_from_assignment(lap.row_to_col, n1, n2);
  double cost = mapping_cost(g1, g2, mapping, cm);
  mapping = detail::refine_by_swaps(g1, g2, cm, c, lap.row_to_col, cost);
  GedResult r;
  r.path = edit_path_for_mapping(g1, g2, mapping, cm);
  r.cost = r.path.total_cost;
  r.mapping = std::move(mapping);
  return r;
}

// Bipartite (assignment-based) GED: an upper bound on the exact distance,
// computed in cubic time in the node count.
inline GedResult approx_ged(const SceneGraph& g1, const SceneGraph& g2,
                            const CostModel& cm) {
  return approx_ged(IndexedGraph(g1, cm), IndexedGraph(g2, cm), cm);
}

namespace detail {

// Depth-first branch and bound over source nodes in file order. Each level
// maps one source node to an unused target node or deletes it; a child is
// expanded only if its accumulated cost plus an admissible lower bound can
// still beat the incumbent.
class ExactGedSearch {
 public:
  ExactGedSearch(const IndexedGraph& g1, const IndexedGraph& g2, const CostModel& cm)
      : g1_(g1),
        g2_(g2),
        cm_(cm),
        n1_(static_cast<int>(g1.node_count())),
        n2_(static_cast<int>(g2.node_count())),
        pair_memo_(static_cast<std::size_t>(n1_) * n1_ * (n2_ + 1) * (n2_ + 1),
                   std::numeric_limits<double>::quiet_NaN()) {}

  NodeMapping run(const NodeMapping& incumbent, double incumbent_cost) {
    best_ = incumbent;
    best_cost_ = incumbent_cost;
    NodeMapping current(n1_, -1);
    std::vector<char> used(n2_, 0);
    dfs(0, 0.0, current, used);
    return best_;
  }

 private:
  // Edit cost of the g1 edges from a to b given their images x, y (-1 means
  // deleted). Includes target edges between x and y.
  double pair_cost(int a, int b, int x, int y) {
    double& slot = pair_memo_[((static_cast<std::size_t>(a) * n1_ + b) * (n2_ + 1) +
                               (x + 1)) * (n2_ + 1) + (y + 1)];
    if (!std::isnan(slot)) return slot;
    const auto& ids1 = g1_.group(a, b);
    std::vector<int> l1;
    for (int e : ids1) l1.push_back(g1_.edges()[e].label);
    std::vector<int> l2;
    if (x >= 0 && y >= 0)
      for (int e : g2_.group(x, y)) l2.push_back(g2_.edges()[e].label);
    slot = label_matching_cost(l1, l2, cm_);
    return slot;
  }

  // Cost added by mapping source node i to x, given nodes < i are placed.
  double step_cost(int i, int x, const NodeMapping& current) {
    double c = x < 0 ? cm_.deletion(g1_.label(i))
                     : cm_.substitution(g1_.label(i), g2_.label(x));
    for (int j = 0; j < i; ++j) {
      c += pair_cost(i, j, x, current[j]);
      c += pair_cost(j, i, current[j], x);
    }
    c += pair_cost(i, i, x, x);
    return c;
  }

  // Everything left once all source nodes are placed: unused target nodes
  // and every target edge touching one.
  double completion_cost(const std::vector<char>& used) const {
    double c = 0.0;
    for (int v = 0; v < n2_; ++v)
      if (!used[v]) c += cm_.insertion(g2_.label(v));
    for (const auto& e : g2_.edges())
      if (!used[e.source] || !used[e.target]) c += cm_.insertion(e.label);
    return c;
  }

  // Optimal node-only assignment of the remaining source nodes to the unused
  // target nodes; edge costs are non-negative, so this never overestimates.
  double lower_bound(int first, const std::vector<char>& used) const {
    std::vector<int> rows;
    for (int u = first; u < n1_; ++u) rows.push_back(g1_.label(u));
    std::vector<int> cols;
    for (int v = 0; v < n2_; ++v)
      if (!used[v]) cols.push_back(g2_.label(v));
    return label_matching_cost(rows, cols, cm_);
  }

  void dfs(int i, double cost, NodeMapping& current, std::vector<char>& used) {
    if (i == n1_) {
      const double total = cost + completion_cost(used);
      if (total < best_cost_ - kCostTolerance) {
        best_cost_ = total;
        best_ = current;
      }
      return;
    }
    struct Child {
      int target;
      double cost;
      double bound;
    };
    std::vector<Child> children;
    for (int x = -1; x < n2_; ++x) {
      if (x >= 0 && used[x]) continue;
      current[i] = x;
      const double c = cost + step_cost(i, x, current);
      if (x >= 0) used[x] = 1;
      const double bound = c + lower_bound(i + 1, used);
      if (x >= 0) used[x] = 0;
      current[i] = -1;
      if (bound < best_cost_ - kCostTolerance) children.push_back({x, c, bound});
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& a, const Child& b) { return a.bound < b.bound; });
    for (const auto& child : children) {
      if (child.bound >= best_cost_ - kCostTolerance) continue;
      current[i] = child.target;
      if (child.target >= 0) used[child.target] = 1;
      dfs(i + 1, child.cost, current, used);
      if (child.target >= 0) used[child.target] = 0;
      current[i] = -1;
    }
  }

  const IndexedGraph& g1_;
  const IndexedGraph& g2_;
  const CostModel& cm_;
  int n1_;
  int n2_;
  std::vector<double> pair_memo_;
  NodeMapping best_;
  double best_cost_ = 0.0;
};

}  // namespace detail

inline GedResult exact_ged(const IndexedGraph& g1, const IndexedGraph& g2,
                           const CostModel& cm,
                           std::size_t node_budget = kDefaultNodeBudget) {
  const std::size_t largest = std::max(g1.node_count(), g2.node_count());
  if (largest > node_budget)
    throw Error(ErrorKind::kSize,
                "exact GED limited to " + std::to_string(node_budget) +
                    " nodes, got " + std::to_string(largest) + " ('" +
                    g1.graph().id + "' vs '" + g2.graph().id +
                    "'); use the approximate method");
  const GedResult seed = approx_ged(g1, g2, cm);
  detail::ExactGedSearch search(g1, g2, cm);
  GedResult r;
  r.mapping = search.run(seed.mapping, seed.cost);
  r.path = edit_path_for_mapping(g1, g2, r.mapping, cm);
  r.cost = r.path.total_cost;
  return r;
}

// Exact GED: minimum over all node mappings, including deletions and
// insertions. Throws kSize beyond node_budget nodes.
inline GedResult exact_ged(const SceneGraph& g1, const SceneGraph& g2,
                           const CostModel& cm,
                           std::size_t node_budget = kDefaultNodeBudget) {
  return exact_ged(IndexedGraph(g1, cm), IndexedGraph(g2, cm), cm, node_budget);
}

enum class GedMethod { kExact, kApprox };

inline std::string_view to_string(GedMethod m) {
  return m == GedMethod::kExact ? "exact" : "approx";
}

inline GedMethod parse_ged_method(std::string_view s) {
  if (s == "exact") return GedMethod::kExact;
  if (s == "approx") return GedMethod::kApprox;
  throw Error(ErrorKind::kSpec, "unknown GED method '" + std::string(s) + "'");
}

struct PairwiseOptions {
  GedMethod method = GedMethod::kApprox;
  // Compute both triangles independently instead of mirroring r < c.
  bool directional = false;
  std::size_t node_budget = kDefaultNodeBudget;
  unsigned workers = 0;  // 0 = default_workers()
};

// All-pairs GED over a dataset, rows and columns in dataset order.
inline LabeledMatrix pairwise_ged_matrix(const LabeledDataset& ds,
                                         const CostModel& cm,
                                         const PairwiseOptions& opts = {}) {
  const std::size_t n = ds.size();
  std::vector<IndexedGraph> indexed;
  indexed.reserve(n);
  for (const auto& g : ds.graphs()) indexed.emplace_back(g, cm);
  if (opts.method == GedMethod::kExact)
    for (const auto& g : ds.graphs())
      if (g.nodes.size() > opts.node_budget)
        throw Error(ErrorKind::kSize, "graph '" + g.id + "' has " +
                                          std::to_string(g.nodes.size()) +
                                          " nodes, over the exact GED budget of " +
                                          std::to_string(opts.node_budget));

  LabeledMatrix out;
  for (const auto& g : ds.graphs()) out.ids.push_back(g.id);
  out.values = Eigen::MatrixXd::Zero(n, n);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (r < c || (opts.directional && r > c)) pairs.emplace_back(r, c);

  parallel_for(pairs.size(), opts.workers, [&](std::size_t k) {
    const auto [r, c] = pairs[k];
    try {
      const GedResult res = opts.method == GedMethod::kExact
                                ? exact_ged(indexed[r], indexed[c], cm, opts.node_budget)
                                : approx_ged(indexed[r], indexed[c], cm);
      out.values(r, c) = res.cost;
      if (!opts.directional) out.values(c, r) = res.cost;
    } catch (const Error& e) {
      throw Error(e.kind(), "pair ('" + out.ids[r] + "', '" + out.ids[c] + "'): " + e.message());
    }
  });
  return out;
}

}  // namespace cfged
