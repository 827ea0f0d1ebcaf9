#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cfged/error.hpp"
#include "cfged/rng.hpp"

namespace cfged {

struct ConceptNode {
  std::string node_id;
  std::string concept_name;

  bool operator==(const ConceptNode&) const = default;
};

// Directed role edge; `predicate` is a taxonomy concept like the node labels.
struct RoleEdge {
  std::string source;
  std::string target;
  std::string predicate;

  bool operator==(const RoleEdge&) const = default;
};

// Directed labeled multigraph. Parallel edges and self-loops are allowed.
struct SceneGraph {
  std::string id;
  std::vector<ConceptNode> nodes;
  std::vector<RoleEdge> edges;

  bool operator==(const SceneGraph&) const = default;
};

// Throws kConsistency if node ids repeat, an edge dangles, the graph is
// empty, or a label is empty.
inline void validate(const SceneGraph& g) {
  if (g.id.empty()) throw Error(ErrorKind::kConsistency, "graph with empty id");
  if (g.nodes.empty())
    throw Error(ErrorKind::kConsistency, "graph '" + g.id + "' has no nodes");
  std::unordered_set<std::string> ids;
  for (const auto& n : g.nodes) {
    if (n.concept_name.empty())
      throw Error(ErrorKind::kConsistency, "graph '" + g.id + "' node '" +
                                               n.node_id + "' has empty concept");
    if (!ids.insert(n.node_id).second)
      throw Error(ErrorKind::kConsistency, "graph '" + g.id +
                                               "' repeats node id '" +
                                               n.node_id + "'");
  }
  for (const auto& e : g.edges) {
    for (const auto* end : {&e.source, &e.target}) {
      if (!ids.count(*end))
        throw Error(ErrorKind::kConsistency, "graph '" + g.id +
                                                 "' edge references missing node '" +
                                                 *end + "'");
    }
    if (e.predicate.empty())
      throw Error(ErrorKind::kConsistency,
                  "graph '" + g.id + "' edge has empty predicate");
  }
}

// Node-id -> position lookup for one graph.
inline std::unordered_map<std::string, std::size_t> node_positions(
    const SceneGraph& g) {
  std::unordered_map<std::string, std::size_t> pos;
  pos.reserve(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) pos.emplace(g.nodes[i].node_id, i);
  return pos;
}

struct GraphStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t isolated_node_count = 0;
  double density = 0.0;  // edges per node

  double isolated_fraction() const {
    return node_count == 0 ? 0.0
                           : static_cast<double>(isolated_node_count) /
                                 static_cast<double>(node_count);
  }
};

inline GraphStats graph_stats(const SceneGraph& g) {
  GraphStats s;
  s.node_count = g.nodes.size();
  s.edge_count = g.edges.size();
  std::unordered_set<std::string> touched;
  for (const auto& e : g.edges) {
    touched.insert(e.source);
    touched.insert(e.target);
  }
  for (const auto& n : g.nodes)
    if (!touched.count(n.node_id)) ++s.isolated_node_count;
  s.density = s.node_count == 0 ? 0.0
                                : static_cast<double>(s.edge_count) /
                                      static_cast<double>(s.node_count);
  return s;
}

// Graphs plus one class label per graph. Graph order is the file order and
// is the row/column order of every matrix built from the dataset.
class LabeledDataset {
 public:
  LabeledDataset() = default;

  // Validates every graph, id uniqueness, and that labels cover exactly the
  // graph ids. Does not require two classes; see require_two_classes().
  LabeledDataset(std::vector<SceneGraph> graphs,
                 std::map<std::string, std::string> labels)
      : graphs_(std::move(graphs)), labels_(std::move(labels)) {
    for (std::size_t i = 0; i < graphs_.size(); ++i) {
      validate(graphs_[i]);
      if (!index_.emplace(graphs_[i].id, i).second)
        throw Error(ErrorKind::kConsistency,
                    "duplicate graph id '" + graphs_[i].id + "'");
      if (!labels_.count(graphs_[i].id))
        throw Error(ErrorKind::kConsistency,
                    "graph '" + graphs_[i].id + "' has no label");
    }
    for (const auto& [id, label] : labels_) {
      if (!index_.count(id))
        throw Error(ErrorKind::kConsistency,
                    "label references unknown graph id '" + id + "'");
      if (label.empty())
        throw Error(ErrorKind::kConsistency, "graph '" + id + "' has empty label");
    }
  }

  const std::vector<SceneGraph>& graphs() const { return graphs_; }
  const std::map<std::string, std::string>& labels() const { return labels_; }
  std::size_t size() const { return graphs_.size(); }
  const SceneGraph& operator[](std::size_t i) const { return graphs_[i]; }

  const std::string& label_of(const std::string& graph_id) const {
    auto it = labels_.find(graph_id);
    if (it == labels_.end())
      throw Error(ErrorKind::kLookup, "unknown graph id '" + graph_id + "'");
    return it->second;
  }
  const std::string& label_at(std::size_t i) const {
    return labels_.at(graphs_[i].id);
  }

  std::size_t index_of(const std::string& graph_id) const {
    auto it = index_.find(graph_id);
    if (it == index_.end())
      throw Error(ErrorKind::kLookup, "unknown graph id '" + graph_id + "'");
    return it->second;
  }
  bool contains(const std::string& graph_id) const {
    return index_.count(graph_id) > 0;
  }

  std::set<std::string> classes() const {
    std::set<std::string> out;
    for (const auto& [id, label] : labels_) out.insert(label);
    return out;
  }

  void require_two_classes() const {
    if (classes().size() < 2)
      throw Error(ErrorKind::kConsistency,
                  "dataset needs at least two distinct class labels");
  }

  // Subset in the given index order.
  LabeledDataset subset(const std::vector<std::size_t>& indices) const {
    std::vector<SceneGraph> gs;
    std::map<std::string, std::string> ls;
    gs.reserve(indices.size());
    for (std::size_t i : indices) {
      gs.push_back(graphs_.at(i));
      ls.emplace(graphs_[i].id, labels_.at(graphs_[i].id));
    }
    return LabeledDataset(std::move(gs), std::move(ls));
  }

  bool operator==(const LabeledDataset& o) const {
    return graphs_ == o.graphs_ && labels_ == o.labels_;
  }

 private:
  std::vector<SceneGraph> graphs_;
  std::map<std::string, std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct DenseSplitThresholds {
  std::size_t max_nodes = 20;
  double min_density = 0.8;
  double max_isolated_fraction = 0.2;
};

inline bool qualifies_dense(const SceneGraph& g, const DenseSplitThresholds& t) {
  const GraphStats s = graph_stats(g);
  return s.node_count <= t.max_nodes && s.density >= t.min_density &&
         s.isolated_fraction() <= t.max_isolated_fraction;
}

// First n graphs in file order meeting all three thresholds.
inline LabeledDataset split_dense(const LabeledDataset& ds,
                                  const DenseSplitThresholds& t, std::size_t n) {
  std::vector<std::size_t> picked;
  std::size_t qualifying = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!qualifies_dense(ds[i], t)) continue;
    ++qualifying;
    if (picked.size() < n) picked.push_back(i);
  }
  if (picked.size() < n)
    throw Error(ErrorKind::kCapacity,
                "requested " + std::to_string(n) + " dense graphs but only " +
                    std::to_string(qualifying) + " qualified");
  return ds.subset(picked);
}

// Seeded sample of n graphs without replacement, returned in file order.
inline LabeledDataset split_random(const LabeledDataset& ds, std::size_t n,
                                   std::uint64_t seed) {
  if (n > ds.size())
    throw Error(ErrorKind::kCapacity, "requested " + std::to_string(n) +
                                          " graphs from a dataset of " +
                                          std::to_string(ds.size()));
  std::vector<std::size_t> order(ds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(order.size() - i));
    std::swap(order[i], order[j]);
  }
  order.resize(n);
  std::sort(order.begin(), order.end());
  return ds.subset(order);
}

}  // namespace cfged
