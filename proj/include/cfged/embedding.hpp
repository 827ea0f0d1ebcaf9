#pragma once

// Graph embeddings for cosine-similarity retrieval. Vectors come either from
// a CSV export of an externally trained model or from the built-in
// feature-hashed WL embedding.
//
// CSV: header "graph_id,v0,v1,...", one row per graph.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "cfged/dataset_io.hpp"
#include "cfged/error.hpp"
#include "cfged/graph.hpp"
#include "cfged/kernels.hpp"
#include "cfged/matrix_io.hpp"
#include "cfged/rng.hpp"

namespace cfged {

struct ScoredId {
  std::string id;
  double score = 0.0;
  bool operator==(const ScoredId&) const = default;
};

class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  // Throws kShape on a dimension mismatch, kValue on non-finite entries,
  // kConsistency on duplicate ids.
  EmbeddingTable(std::vector<std::string> ids, std::vector<std::vector<double>> vectors,
                 std::string source_tag)
      : ids_(std::move(ids)), vectors_(std::move(vectors)), tag_(std::move(source_tag)) {
    if (ids_.size() != vectors_.size())
      throw Error(ErrorKind::kShape, "embedding ids and vectors differ in count");
    dim_ = vectors_.empty() ? 0 : vectors_.front().size();
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (vectors_[i].size() != dim_)
        throw Error(ErrorKind::kShape, "embedding '" + ids_[i] + "' has dimension " +
                                           std::to_string(vectors_[i].size()) +
                                           ", expected " + std::to_string(dim_));
      for (double x : vectors_[i])
        if (!std::isfinite(x))
          throw Error(ErrorKind::kValue, "embedding '" + ids_[i] + "' has a non-finite entry");
      if (!index_.emplace(ids_[i], i).second)
        throw Error(ErrorKind::kConsistency, "duplicate embedding id '" + ids_[i] + "'");
    }
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  const std::string& source_tag() const { return tag_; }
  const std::vector<std::string>& ids() const { return ids_; }

  bool contains(const std::string& id) const { return index_.count(id) > 0; }
  const std::vector<double>& vector(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end())
      throw Error(ErrorKind::kLookup, "no embedding for graph '" + id + "'");
    return vectors_[it->second];
  }

  std::vector<std::string> zero_vector_ids() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ids_.size(); ++i)
      if (std::all_of(vectors_[i].begin(), vectors_[i].end(),
                      [](double x) { return x == 0.0; }))
        out.push_back(ids_[i]);
    return out;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<std::vector<double>> vectors_;
  std::string tag_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline void warn_zero_vectors(const EmbeddingTable& table) {
  for (const auto& id : table.zero_vector_ids())
    std::clog << "warning: embedding for '" << id
              << "' is all zeros; its cosine similarity is taken as 0\n";
}

inline EmbeddingTable parse_embeddings(const std::string& text, const std::string& source,
                                       std::string source_tag) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::size_t header_dim = 0;
  bool header_seen = false;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> vectors;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (line.empty()) continue;
    const auto fields = detail::split_line(line, ',');
    const std::string where = source + ":" + std::to_string(lineno);
    if (!header_seen) {
      if (fields.size() < 2 || fields[0] != "graph_id")
        throw Error(ErrorKind::kParse, where + ": expected header 'graph_id,v0,...'");
      header_dim = fields.size() - 1;
      header_seen = true;
      continue;
    }
    if (!vectors.empty() && fields.size() - 1 != vectors.front().size())
      throw Error(ErrorKind::kShape, where + ": row has " + std::to_string(fields.size() - 1) +
                                         " values, first row has " +
                                         std::to_string(vectors.front().size()));
    std::vector<double> v;
    v.reserve(fields.size() - 1);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      const char* begin = fields[j].c_str();
      char* end = nullptr;
      const double x = std::strtod(begin, &end);
      if (fields[j].empty() || end != begin + fields[j].size())
        throw Error(ErrorKind::kParse, where + ": bad number '" + fields[j] + "'");
      if (!std::isfinite(x))
        throw Error(ErrorKind::kValue, where + ": non-finite value '" + fields[j] + "'");
      v.push_back(x);
    }
    ids.push_back(fields[0]);
    vectors.push_back(std::move(v));
  }
  if (!header_seen) throw Error(ErrorKind::kParse, source + ": empty embedding file");
  if (!vectors.empty() && vectors.front().size() != header_dim)
    throw Error(ErrorKind::kShape, source + ": header names " + std::to_string(header_dim) +
                                       " columns, rows have " +
                                       std::to_string(vectors.front().size()));
  return EmbeddingTable(std::move(ids), std::move(vectors), std::move(source_tag));
}

inline EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  auto table = parse_embeddings(detail::read_file(path), path.string(),
                                path.stem().string());
  warn_zero_vectors(table);
  return table;
}

inline std::string embeddings_to_csv(const EmbeddingTable& table) {
  std::string out = "graph_id";
  for (std::size_t d = 0; d < table.dim(); ++d) out += ",v" + std::to_string(d);
  out += "\n";
  for (const auto& id : table.ids()) {
    out += id;
    for (double x : table.vector(id)) out += "," + format_double(x);
    out += "\n";
  }
  return out;
}

inline void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
  detail::write_file(path, embeddings_to_csv(table));
}

// Signed feature hashing of each graph's WL subtree histogram into `dim`
// buckets. Cosine between two vectors approximates the normalized WL kernel.
inline EmbeddingTable wl_feature_embedding(const LabeledDataset& ds, const KernelConfig& cfg,
                                           std::size_t dim, std::uint64_t seed,
                                           unsigned workers = 0) {
  if (cfg.kind != KernelKind::kWL)
    throw Error(ErrorKind::kSpec, "wl_feature_embedding needs a WL kernel config");
  cfg.validate();
  if (dim == 0) throw Error(ErrorKind::kSpec, "embedding dimension must be positive");
  std::vector<std::string> ids;
  for (const auto& g : ds.graphs()) ids.push_back(g.id);
  std::vector<std::vector<double>> vectors(ds.size(), std::vector<double>(dim, 0.0));
  const std::uint64_t bucket_seed = splitmix64(seed);
  const std::uint64_t sign_seed = splitmix64(seed ^ 0x5bd1e995ULL);
  parallel_for(ds.size(), workers, [&](std::size_t i) {
    for (const auto& [feature, count] : wl_feature_hashes(ds[i], cfg.wl_iterations)) {
      const std::size_t bucket = hash_combine(bucket_seed, feature) % dim;
      const double sign = (hash_combine(sign_seed, feature) & 1ULL) ? 1.0 : -1.0;
      vectors[i][bucket] += sign * count;
    }
  });
  return EmbeddingTable(std::move(ids), std::move(vectors), "wl-hash");
}

// Cosine similarity; 0 when either vector is zero.
inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

// Sorts by similarity descending, then id ascending.
inline void sort_by_similarity(std::vector<ScoredId>& list) {
  std::sort(list.begin(), list.end(), [](const ScoredId& a, const ScoredId& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
}

// Top-k candidates by cosine similarity to the query.
inline std::vector<ScoredId> cosine_rank(const std::string& query_id,
                                         const EmbeddingTable& table,
                                         const std::set<std::string>& candidates,
                                         std::size_t k) {
  if (k == 0) throw Error(ErrorKind::kSpec, "k must be >= 1");
  const auto& q = table.vector(query_id);
  std::vector<ScoredId> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back({c, cosine(q, table.vector(c))});
  sort_by_similarity(out);
  if (out.size() > k) out.resize(k);
  return out;
}

}  // namespace cfged
