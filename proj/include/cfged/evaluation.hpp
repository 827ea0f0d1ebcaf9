#pragma once

// Ranking metrics against a GED ground truth.
//
// Two relevance modes per query:
//   topk   - the ground-truth top-k is relevant when scoring @k
//   binary - only the ground-truth top-1 is relevant
// NDCG uses binary gains, 1-based positions and log2(position + 1)
// discounts; the ideal DCG packs min(k, |relevant|) hits at the top.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cfged/error.hpp"
#include "cfged/matrix_io.hpp"
#include "cfged/retrieval.hpp"

namespace cfged {

enum class RelevanceMode { kTopK, kBinary };

inline std::string_view to_string(RelevanceMode m) {
  return m == RelevanceMode::kTopK ? "topk" : "binary";
}

struct RelevanceSpec {
  RelevanceMode mode = RelevanceMode::kTopK;
  std::size_t k_relevant = 1;
};

// How binary-mode precision is reported. kHitRate: 1 if the ground-truth
// top-1 is among the first k (averaged, a hit rate). kFraction: hits / k.
enum class BinaryPrecision { kHitRate, kFraction };

// |top-k(retrieved) ∩ relevant| / k
inline double precision_at_k(const std::vector<std::string>& retrieved,
                             const std::set<std::string>& relevant, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::kSpec, "k must be >= 1");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(k, retrieved.size()); ++i)
    if (relevant.count(retrieved[i])) ++hits;
  return static_cast<double>(hits) / static_cast<double>(k);
}

inline double ndcg_at_k(const std::vector<std::string>& retrieved,
                        const std::set<std::string>& relevant, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::kSpec, "k must be >= 1");
  if (relevant.empty()) throw Error(ErrorKind::kSpec, "NDCG needs a non-empty relevant set");
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, retrieved.size()); ++i)
    if (relevant.count(retrieved[i])) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, relevant.size()); ++i)
    idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return dcg / idcg;
}

inline int binary_hit_at_k(const std::vector<std::string>& retrieved,
                           const std::string& gt_top1, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::kSpec, "k must be >= 1");
  for (std::size_t i = 0; i < std::min(k, retrieved.size()); ++i)
    if (retrieved[i] == gt_top1) return 1;
  return 0;
}

// Relevant ids for one query under a relevance spec.
inline std::set<std::string> relevant_set(const std::vector<ScoredId>& gt_order,
                                          const RelevanceSpec& spec) {
  const std::size_t take = spec.mode == RelevanceMode::kBinary ? 1 : spec.k_relevant;
  std::set<std::string> out;
  for (std::size_t i = 0; i < std::min(take, gt_order.size()); ++i) out.insert(gt_order[i].id);
  return out;
}

struct ModeMetrics {
  std::map<std::size_t, double> ndcg;       // k -> mean NDCG@k
  std::map<std::size_t, double> precision;  // k -> mean P@k
};

struct MetricReport {
  std::string backend;
  std::size_t query_count = 0;
  std::vector<std::size_t> ks;
  ModeMetrics topk;
  ModeMetrics binary;

  const ModeMetrics& mode(RelevanceMode m) const {
    return m == RelevanceMode::kTopK ? topk : binary;
  }
};

inline std::vector<std::string> ids_of(const std::vector<ScoredId>& list) {
  std::vector<std::string> ids;
  ids.reserve(list.size());
  for (const auto& s : list) ids.push_back(s.id);
  return ids;
}

// Per-query metrics at every k under both relevance modes, averaged over
// queries in ground-truth order. Queries whose ground-truth list is empty
// are skipped.
inline MetricReport evaluate(const GroundTruth& gt, const RankTable& ranks,
                             std::vector<std::size_t> ks,
                             BinaryPrecision binary_precision = BinaryPrecision::kHitRate) {
  if (ks.empty()) throw Error(ErrorKind::kSpec, "no k values to evaluate");
  for (auto k : ks)
    if (k == 0) throw Error(ErrorKind::kSpec, "k must be >= 1");
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  if (ranks.queries.size() != gt.ranks.queries.size())
    throw Error(ErrorKind::kCoverage, "rank table covers " +
                                          std::to_string(ranks.queries.size()) +
                                          " queries, ground truth " +
                                          std::to_string(gt.ranks.queries.size()));
  std::map<std::string, const QueryRank*> by_id;
  for (const auto& q : ranks.queries) by_id[q.query_id] = &q;

  MetricReport report;
  report.backend = ranks.backend_tag;
  report.ks = ks;
  for (auto k : ks) {
    report.topk.ndcg[k] = report.topk.precision[k] = 0.0;
    report.binary.ndcg[k] = report.binary.precision[k] = 0.0;
  }

  for (const auto& truth : gt.ranks.queries) {
    auto it = by_id.find(truth.query_id);
    if (it == by_id.end())
      throw Error(ErrorKind::kCoverage, "rank table lacks query '" + truth.query_id + "'");
    if (truth.candidates.empty()) continue;
    const auto retrieved = ids_of(it->second->candidates);
    const std::set<std::string> top1 = relevant_set(truth.candidates, {RelevanceMode::kBinary, 1});
    for (auto k : ks) {
      const auto relevant = relevant_set(truth.candidates, {RelevanceMode::kTopK, k});
      report.topk.precision[k] += precision_at_k(retrieved, relevant, k);
      report.topk.ndcg[k] += ndcg_at_k(retrieved, relevant, k);
      report.binary.ndcg[k] += ndcg_at_k(retrieved, top1, k);
      report.binary.precision[k] +=
          binary_precision == BinaryPrecision::kHitRate
              ? static_cast<double>(binary_hit_at_k(retrieved, truth.candidates.front().id, k))
              : precision_at_k(retrieved, top1, k);
    }
    ++report.query_count;
  }
  if (report.query_count > 0) {
    const double n = static_cast<double>(report.query_count);
    for (auto* mode : {&report.topk, &report.binary}) {
      for (auto& [k, v] : mode->ndcg) v /= n;
      for (auto& [k, v] : mode->precision) v /= n;
    }
  }
  return report;
}

// One row per backend; NDCG then P columns, each in descending k.
inline std::string metrics_csv(const std::vector<MetricReport>& reports, RelevanceMode mode) {
  if (reports.empty()) return "backend\n";
  std::vector<std::size_t> ks = reports.front().ks;
  std::sort(ks.rbegin(), ks.rend());
  std::string out = "backend";
  for (auto k : ks) out += ",NDCG@" + std::to_string(k);
  for (auto k : ks) out += ",P@" + std::to_string(k);
  out += "\n";
  for (const auto& r : reports) {
    const auto& m = r.mode(mode);
    out += r.backend;
    for (auto k : ks) out += "," + format_double(m.ndcg.at(k));
    for (auto k : ks) out += "," + format_double(m.precision.at(k));
    out += "\n";
  }
  return out;
}

}  // namespace cfged
