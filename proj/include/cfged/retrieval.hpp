#pragma once

// Class-constrained retrieval: for a query of class A only graphs of another
// class are candidates. The counterfactual of a query is its minimum-GED
// candidate. Backends (GED matrix, Gram matrix, embeddings) share one
// score-plus-direction interface so evaluation does not care which produced
// a rank.

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cfged/dataset_io.hpp"
#include "cfged/embedding.hpp"
#include "cfged/error.hpp"
#include "cfged/graph.hpp"
#include "cfged/kernels.hpp"
#include "cfged/matrix_io.hpp"
#include "cfged/parallel.hpp"
#include "json.hpp"

namespace cfged {

enum class ScoreDirection {
  kAscending,   // distances: smaller is closer
  kDescending,  // similarities: larger is closer
};

inline std::string_view to_string(ScoreDirection d) {
  return d == ScoreDirection::kAscending ? "ascending" : "descending";
}

inline ScoreDirection parse_direction(std::string_view s) {
  if (s == "ascending") return ScoreDirection::kAscending;
  if (s == "descending") return ScoreDirection::kDescending;
  throw Error(ErrorKind::kParse, "unknown rank direction '" + std::string(s) + "'");
}

// Closest first; equal scores by ascending graph id.
inline void sort_ranked(std::vector<ScoredId>& list, ScoreDirection direction) {
  std::sort(list.begin(), list.end(), [direction](const ScoredId& a, const ScoredId& b) {
    if (a.score != b.score)
      return direction == ScoreDirection::kAscending ? a.score < b.score
                                                     : a.score > b.score;
    return a.id < b.id;
  });
}

class ScoreBackend {
 public:
  using ScoreFn = std::function<double(const std::string&, const std::string&)>;
  using CoversFn = std::function<bool(const std::string&)>;

  ScoreBackend(std::string tag, ScoreDirection direction, ScoreFn score, CoversFn covers)
      : tag_(std::move(tag)),
        direction_(direction),
        score_(std::move(score)),
        covers_(std::move(covers)) {}

  static ScoreBackend distances(const LabeledMatrix& m, std::string tag) {
    return from_matrix(m, std::move(tag), ScoreDirection::kAscending);
  }
  static ScoreBackend similarities(const LabeledMatrix& m, std::string tag) {
    return from_matrix(m, std::move(tag), ScoreDirection::kDescending);
  }
  static ScoreBackend gram(const GramMatrix& g, std::string tag) {
    return similarities(g.labeled(), std::move(tag));
  }
  static ScoreBackend embeddings(EmbeddingTable table, std::string tag) {
    auto shared = std::make_shared<const EmbeddingTable>(std::move(table));
    return ScoreBackend(
        std::move(tag), ScoreDirection::kDescending,
        [shared](const std::string& q, const std::string& c) {
          return cosine(shared->vector(q), shared->vector(c));
        },
        [shared](const std::string& id) { return shared->contains(id); });
  }

  const std::string& tag() const { return tag_; }
  ScoreDirection direction() const { return direction_; }
  double score(const std::string& query, const std::string& candidate) const {
    return score_(query, candidate);
  }

  void check_coverage(const LabeledDataset& ds) const {
    std::string missing;
    std::size_t count = 0;
    for (const auto& g : ds.graphs())
      if (!covers_(g.id)) {
        if (count < 10) missing += (missing.empty() ? "" : ", ") + g.id;
        ++count;
      }
    if (count > 0)
      throw Error(ErrorKind::kLookup, "backend '" + tag_ + "' lacks " +
                                          std::to_string(count) + " graph(s): " + missing +
                                          (count > 10 ? ", ..." : ""));
  }

 private:
  static ScoreBackend from_matrix(const LabeledMatrix& m, std::string tag,
                                  ScoreDirection direction) {
    auto shared = std::make_shared<const LabeledMatrix>(m);
    auto index = std::make_shared<std::unordered_map<std::string, Eigen::Index>>();
    for (std::size_t i = 0; i < m.ids.size(); ++i) index->emplace(m.ids[i], i);
    return ScoreBackend(
        std::move(tag), direction,
        [shared, index](const std::string& q, const std::string& c) {
          auto qi = index->find(q);
          auto ci = index->find(c);
          if (qi == index->end() || ci == index->end())
            throw Error(ErrorKind::kLookup, "matrix lacks '" +
                                                (qi == index->end() ? q : c) + "'");
          return shared->values(qi->second, ci->second);
        },
        [index](const std::string& id) { return index->count(id) > 0; });
  }

  std::string tag_;
  ScoreDirection direction_;
  ScoreFn score_;
  CoversFn covers_;
};

struct QueryRank {
  std::string query_id;
  std::vector<ScoredId> candidates;
};

// Per-query candidate lists in dataset order.
struct RankTable {
  std::string backend_tag;
  ScoreDirection direction = ScoreDirection::kAscending;
  std::vector<QueryRank> queries;

  const QueryRank* find(const std::string& query_id) const {
    for (const auto& q : queries)
      if (q.query_id == query_id) return &q;
    return nullptr;
  }
};

struct GroundTruth {
  RankTable ranks;
  LabeledMatrix matrix;
};

// Ids of every graph whose class differs from the query's, in dataset order.
inline std::vector<std::string> different_class_candidates(const LabeledDataset& ds,
                                                           const std::string& query) {
  const auto& label = ds.label_of(query);
  std::vector<std::string> out;
  for (const auto& g : ds.graphs())
    if (g.id != query && ds.label_of(g.id) != label) out.push_back(g.id);
  return out;
}

inline std::vector<ScoredId> rank_query(const LabeledDataset& ds, const ScoreBackend& backend,
                                        const std::string& query) {
  std::vector<ScoredId> list;
  for (const auto& c : different_class_candidates(ds, query))
    list.push_back({c, backend.score(query, c)});
  sort_ranked(list, backend.direction());
  return list;
}

// Rank lists for every query, truncated to k (k = 0 keeps full lists).
inline RankTable backend_ranks(const LabeledDataset& ds, const ScoreBackend& backend,
                               std::size_t k, unsigned workers = 0) {
  backend.check_coverage(ds);
  RankTable table;
  table.backend_tag = backend.tag();
  table.direction = backend.direction();
  table.queries.resize(ds.size());
  parallel_for(ds.size(), workers, [&](std::size_t i) {
    auto& q = table.queries[i];
    q.query_id = ds[i].id;
    q.candidates = rank_query(ds, backend, q.query_id);
    if (k > 0 && q.candidates.size() > k) q.candidates.resize(k);
  });
  return table;
}

inline void check_matrix_matches(const LabeledDataset& ds, const LabeledMatrix& m) {
  if (m.ids.size() != ds.size() || m.values.rows() != static_cast<Eigen::Index>(ds.size()) ||
      m.values.cols() != static_cast<Eigen::Index>(ds.size()))
    throw Error(ErrorKind::kShape, "matrix is " + std::to_string(m.values.rows()) + "x" +
                                       std::to_string(m.values.cols()) + " but dataset has " +
                                       std::to_string(ds.size()) + " graphs");
  for (const auto& id : m.ids)
    if (!ds.contains(id))
      throw Error(ErrorKind::kLookup, "matrix id '" + id + "' not in dataset");
}

// Full different-class ranking of every query by GED.
inline GroundTruth ground_truth_ranks(const LabeledDataset& ds, const LabeledMatrix& ged,
                                      unsigned workers = 0) {
  check_matrix_matches(ds, ged);
  GroundTruth gt;
  gt.matrix = ged;
  gt.ranks = backend_ranks(ds, ScoreBackend::distances(ged, "ground-truth"), 0, workers);
  return gt;
}

// Minimum-GED graph of a different class than the query.
inline ScoredId counterfactual(const std::string& query, const LabeledDataset& ds,
                               const LabeledMatrix& ged) {
  check_matrix_matches(ds, ged);
  const auto list = rank_query(ds, ScoreBackend::distances(ged, "ged"), query);
  if (list.empty())
    throw Error(ErrorKind::kEligibility,
                "no graph of a class other than '" + ds.label_of(query) + "' for query '" +
                    query + "'");
  return list.front();
}

inline nlohmann::ordered_json rank_table_to_json(const RankTable& table) {
  nlohmann::ordered_json ranks = nlohmann::ordered_json::object();
  for (const auto& q : table.queries) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& c : q.candidates) list.push_back({{"id", c.id}, {"score", c.score}});
    ranks[q.query_id] = std::move(list);
  }
  return {{"backend_tag", table.backend_tag},
          {"direction", to_string(table.direction)},
          {"ranks", std::move(ranks)}};
}

inline RankTable rank_table_from_json(const std::string& text, const std::string& source) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse, source + ":" +
                                       std::to_string(detail::line_of_offset(text, e.byte)) +
                                       ": " + e.what());
  }
  RankTable table;
  try {
    table.backend_tag = doc.at("backend_tag").get<std::string>();
    table.direction = parse_direction(doc.at("direction").get<std::string>());
    for (const auto& [query, list] : doc.at("ranks").items()) {
      QueryRank q{query, {}};
      for (const auto& c : list)
        q.candidates.push_back({c.at("id").get<std::string>(), c.at("score").get<double>()});
      table.queries.push_back(std::move(q));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, source + ": " + e.what());
  }
  return table;
}

inline void save_rank_table(const RankTable& table, const std::filesystem::path& path) {
  detail::write_file(path, rank_table_to_json(table).dump(1) + "\n");
}

inline RankTable load_rank_table(const std::filesystem::path& path) {
  return rank_table_from_json(detail::read_file(path), path.string());
}

}  // namespace cfged
