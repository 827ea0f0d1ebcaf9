#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cfged/dataset_io.hpp"
#include "cfged/error.hpp"

namespace cfged {

// Rooted concept hierarchy built from child -> parent (hypernym) pairs.
// Concepts are interned to dense indices in first-appearance order.
class Taxonomy {
 public:
  using Edge = std::pair<std::string, std::string>;  // child, parent

  // Throws kStructure on a hypernym cycle, kConnectivity if a concept cannot
  // reach the root, kLookup if the root never appears.
  Taxonomy(const std::vector<Edge>& hypernyms, const std::string& root) {
    for (const auto& [child, parent] : hypernyms) {
      if (child.empty() || parent.empty())
        throw Error(ErrorKind::kStructure, "empty concept identifier");
      const int c = intern(child);
      const int p = intern(parent);
      parents_[c].push_back(p);
      children_[p].push_back(c);
      neighbors_[c].push_back(p);
      neighbors_[p].push_back(c);
    }
    auto it = index_.find(root);
    if (it == index_.end())
      throw Error(ErrorKind::kLookup, "root concept '" + root + "' not in taxonomy");
    root_ = it->second;
    check_acyclic();
    check_rooted();
  }

  std::size_t size() const { return concepts_.size(); }
  int root() const { return root_; }
  const std::string& name(int c) const { return concepts_.at(c); }
  const std::vector<std::string>& concepts() const { return concepts_; }
  const std::vector<int>& parents(int c) const { return parents_.at(c); }
  const std::vector<int>& neighbors(int c) const { return neighbors_.at(c); }

  bool contains(const std::string& name) const {
    return index_.count(name) > 0;
  }
  int index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
      throw Error(ErrorKind::kLookup, "unknown concept '" + name + "'");
    return it->second;
  }

  // Shortest path lengths from `source` to every concept over the undirected
  // hypernym graph.
  std::vector<int> distances_from(int source) const {
    std::vector<int> dist(concepts_.size(), -1);
    std::deque<int> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : neighbors_[u]) {
        if (dist[v] >= 0) continue;
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
    return dist;
  }

  int distance(int a, int b) const {
    if (a == b) return 0;
    return distances_from(a)[b];
  }

 private:
  int intern(const std::string& name) {
    auto [it, inserted] =
        index_.emplace(name, static_cast<int>(concepts_.size()));
    if (inserted) {
      concepts_.push_back(name);
      parents_.emplace_back();
      children_.emplace_back();
      neighbors_.emplace_back();
    }
    return it->second;
  }

  void check_acyclic() const {
    enum : char { kWhite, kGrey, kBlack };
    std::vector<char> color(concepts_.size(), kWhite);
    std::vector<int> stack_path;
    // Iterative DFS with an explicit (node, next-parent) stack.
    for (std::size_t start = 0; start < concepts_.size(); ++start) {
      if (color[start] != kWhite) continue;
      std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(start), 0}};
      color[start] = kGrey;
      stack_path.assign(1, static_cast<int>(start));
      while (!stack.empty()) {
        auto& [u, next] = stack.back();
        if (next < parents_[u].size()) {
          const int p = parents_[u][next++];
          if (color[p] == kGrey) {
            std::string cycle;
            auto pos = std::find(stack_path.begin(), stack_path.end(), p);
            for (auto i = pos; i != stack_path.end(); ++i)
              cycle += concepts_[*i] + " -> ";
            cycle += concepts_[p];
            throw Error(ErrorKind::kStructure, "hypernym cycle: " + cycle);
          }
          if (color[p] == kWhite) {
            color[p] = kGrey;
            stack.emplace_back(p, 0);
            stack_path.push_back(p);
          }
        } else {
          color[u] = kBlack;
          stack.pop_back();
          stack_path.pop_back();
        }
      }
    }
  }

  void check_rooted() const {
    std::vector<char> reached(concepts_.size(), 0);
    std::deque<int> queue{root_};
    reached[root_] = 1;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int c : children_[u]) {
        if (reached[c]) continue;
        reached[c] = 1;
        queue.push_back(c);
      }
    }
    for (std::size_t c = 0; c < concepts_.size(); ++c)
      if (!reached[c])
        throw Error(ErrorKind::kConnectivity, "concept '" + concepts_[c] +
                                                  "' does not reach root '" +
                                                  concepts_[root_] + "'");
  }

  std::vector<std::string> concepts_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<int>> neighbors_;
  int root_ = -1;
};

// TSV "child<TAB>parent" per line; '#' lines and blank lines are skipped.
inline std::vector<Taxonomy::Edge> parse_taxonomy_edges(const std::string& text,
                                                        const std::string& source) {
  std::vector<Taxonomy::Edge> edges;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = detail::split_line(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw Error(ErrorKind::kParse, source + ":" + std::to_string(lineno) +
                                         ": expected 'child<TAB>parent'");
    edges.emplace_back(fields[0], fields[1]);
  }
  return edges;
}

inline Taxonomy load_taxonomy(const std::filesystem::path& path,
                              const std::string& root) {
  return Taxonomy(parse_taxonomy_edges(detail::read_file(path), path.string()),
                  root);
}

// 1 / (1 + shortest undirected hypernym-path length).
inline double path_similarity(const Taxonomy& t, const std::string& a,
                              const std::string& b) {
  return 1.0 / (1.0 + t.distance(t.index(a), t.index(b)));
}

// Edit costs derived from taxonomy distances:
//   substitution(a, b) = 1 - path_similarity(a, b)
//   deletion(a) = insertion(a) = 1 - path_similarity(a, root)
// With kRawHops, deletion/insertion are the raw hop count to the root.
// Distance rows are filled lazily, once per source concept, and are safe to
// fill from concurrent readers.
class CostModel {
 public:
  enum class DeletionMode { kSimilarity, kRawHops };

  explicit CostModel(std::shared_ptr<const Taxonomy> taxonomy,
                     DeletionMode mode = DeletionMode::kSimilarity)
      : taxonomy_(std::move(taxonomy)),
        mode_(mode),
        memo_(std::make_shared<Memo>(taxonomy_->size())) {}

  const Taxonomy& taxonomy() const { return *taxonomy_; }
  DeletionMode deletion_mode() const { return mode_; }

  int concept_index(const std::string& name) const {
    return taxonomy_->index(name);
  }

  int distance(int a, int b) const {
    if (a == b) return 0;
    return a < b ? row(a)[b] : row(b)[a];
  }

  double substitution(int a, int b) const {
    if (a == b) return 0.0;
    return 1.0 - 1.0 / (1.0 + distance(a, b));
  }
  double deletion(int a) const {
    const int d = row(taxonomy_->root())[a];
    if (mode_ == DeletionMode::kRawHops) return static_cast<double>(d);
    return 1.0 - 1.0 / (1.0 + d);
  }
  double insertion(int a) const { return deletion(a); }

  double substitution(const std::string& a, const std::string& b) const {
    return substitution(concept_index(a), concept_index(b));
  }
  double deletion(const std::string& a) const {
    return deletion(concept_index(a));
  }
  double insertion(const std::string& a) const {
    return insertion(concept_index(a));
  }

 private:
  struct Memo {
    explicit Memo(std::size_t n) : once(n), rows(n) {}
    std::vector<std::once_flag> once;
    std::vector<std::vector<int>> rows;
  };

  const std::vector<int>& row(int source) const {
    std::call_once(memo_->once[source], [&] {
      memo_->rows[source] = taxonomy_->distances_from(source);
    });
    return memo_->rows[source];
  }

  std::shared_ptr<const Taxonomy> taxonomy_;
  DeletionMode mode_;
  std::shared_ptr<Memo> memo_;
};

}  // namespace cfged
