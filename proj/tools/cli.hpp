#pragma once

// Command-line front end. `run` is the whole program; main() only forwards
// argv and the standard streams so tests can drive it in-process.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "cfged/cfged.hpp"
#include "json.hpp"

namespace cfged::cli {

inline constexpr char kToolVersion[] = "cfged 0.1.0";

// Every numeric default in one place.
struct Defaults {
  static constexpr char kRoot[] = "entity.n.01";
  static constexpr std::size_t kNodeBudget = kDefaultNodeBudget;  // exact GED
  static constexpr int kWlIterations = 3;
  static constexpr int kNhIterations = 2;
  static constexpr int kNhBits = 32;
  static constexpr int kGsSize = 4;
  static constexpr int kGsSamples = 500;
  static constexpr std::uint64_t kSeed = 0;
  static constexpr std::size_t kEmbeddingDim = 4096;
  static constexpr std::size_t kSplitSize = 500;
  static constexpr std::size_t kDenseMaxNodes = 20;
  static constexpr double kDenseMinDensity = 0.8;
  static constexpr double kDenseMaxIsolated = 0.2;
};

inline const std::vector<std::size_t>& default_ks() {
  static const std::vector<std::size_t> ks{1, 2, 4};
  return ks;
}

// Exit statuses. 0 is success; 2 is a usage error; each error category has
// its own code.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return 3;
    case ErrorKind::kConsistency: return 4;
    case ErrorKind::kCapacity: return 5;
    case ErrorKind::kStructure: return 6;
    case ErrorKind::kConnectivity: return 7;
    case ErrorKind::kLookup: return 8;
    case ErrorKind::kShape: return 9;
    case ErrorKind::kSize: return 10;
    case ErrorKind::kValue: return 11;
    case ErrorKind::kDivergence: return 12;
    case ErrorKind::kEligibility: return 13;
    case ErrorKind::kCoverage: return 14;
    case ErrorKind::kSpec: return 15;
    case ErrorKind::kIo: return 16;
  }
  return 1;
}
inline constexpr int kUsageExit = 2;

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::kIo, "SHA-256 digest failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i)
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

inline std::string file_digest(const std::filesystem::path& path) {
  return sha256_hex(detail::read_file(path));
}

// ---------------------------------------------------------------------------
// Option bundles

struct DataOptions {
  std::string graphs;
  std::string labels;
  std::string taxonomy;
  std::string root = Defaults::kRoot;
  bool raw_hop_del_cost = false;
  unsigned workers = 0;

  void add_dataset(CLI::App* app) {
    app->add_option("--graphs", graphs, "Scene graphs JSON")->required()->check(CLI::ExistingFile);
    app->add_option("--labels", labels, "graph_id,label CSV")->required()->check(CLI::ExistingFile);
    app->add_option("--workers", workers, "Worker threads (0: CFGED_WORKERS or all cores)");
  }
  void add_taxonomy(CLI::App* app) {
    app->add_option("--taxonomy", taxonomy, "child<TAB>parent TSV")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--root", root, "Taxonomy root concept")->capture_default_str();
    app->add_flag("--raw-hop-del-cost", raw_hop_del_cost,
                  "Deletion/insertion cost is the raw hop count to the root");
  }

  LabeledDataset dataset() const { return load_dataset(graphs, labels); }
  CostModel cost_model() const {
    return CostModel(std::make_shared<const Taxonomy>(load_taxonomy(taxonomy, root)),
                     raw_hop_del_cost ? CostModel::DeletionMode::kRawHops
                                      : CostModel::DeletionMode::kSimilarity);
  }
  nlohmann::ordered_json cost_params() const {
    return {{"root", root},
            {"deletion_cost", raw_hop_del_cost ? "raw-hops" : "similarity"}};
  }
};

struct GedOptions {
  std::string method = "approx";
  std::size_t node_budget = Defaults::kNodeBudget;
  bool directional = false;

  void add(CLI::App* app, bool with_directional) {
    app->add_option("--method", method, "exact or approx")
        ->check(CLI::IsMember({"exact", "approx"}))
        ->capture_default_str();
    app->add_option("--node-budget", node_budget, "Largest graph exact GED accepts")
        ->capture_default_str();
    if (with_directional)
      app->add_flag("--directional", directional,
                    "Compute GED(a,b) and GED(b,a) separately instead of mirroring");
  }
  PairwiseOptions pairwise(unsigned workers) const {
    PairwiseOptions o;
    o.method = parse_ged_method(method);
    o.directional = directional;
    o.node_budget = node_budget;
    o.workers = workers;
    return o;
  }
};

struct KernelOptions {
  std::string kind = "wl";
  KernelConfig cfg;
  double rw_lambda = 0.0;
  bool raw = false;

  void add(CLI::App* app, bool with_kind) {
    if (with_kind)
      app->add_option("--kernel", kind, "wl, sp, nh, rw or gs")
          ->check(CLI::IsMember({"wl", "sp", "nh", "rw", "gs"}))
          ->capture_default_str();
    app->add_option("--wl-iterations", cfg.wl_iterations)->capture_default_str();
    app->add_option("--nh-iterations", cfg.nh_iterations)->capture_default_str();
    app->add_option("--nh-bits", cfg.nh_bits)->capture_default_str();
    app->add_option("--rw-lambda", rw_lambda, "Random-walk decay (default: from max degree)");
    app->add_option("--gs-size", cfg.gs_graphlet_size)->capture_default_str();
    app->add_option("--gs-samples", cfg.gs_samples)->capture_default_str();
    app->add_option("--gs-seed", cfg.gs_seed)->capture_default_str();
    app->add_flag("--raw", raw, "Skip cosine normalization of the Gram matrix");
  }
  KernelConfig config(const std::string& name) const {
    KernelConfig c = cfg;
    c.kind = parse_kernel_kind(name);
    if (rw_lambda > 0.0) c.rw_lambda = rw_lambda;
    return c;
  }
};

inline std::vector<std::size_t> parse_ks(const std::string& text) {
  std::vector<std::size_t> ks;
  for (const auto& field : detail::split_line(text, ',')) {
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(field, &used);
    } catch (...) {
    }
    if (used != field.size() || v < 1)
      throw Error(ErrorKind::kSpec, "k values must be positive integers, got '" + field + "'");
    ks.push_back(static_cast<std::size_t>(v));
  }
  if (ks.empty()) throw Error(ErrorKind::kSpec, "no k values given");
  return ks;
}

inline BinaryPrecision parse_binary_precision(const std::string& s) {
  return s == "fraction" ? BinaryPrecision::kFraction : BinaryPrecision::kHitRate;
}

inline const SceneGraph& graph_by_id(const LabeledDataset& ds, const std::string& id) {
  return ds[ds.index_of(id)];
}

// ---------------------------------------------------------------------------
// Pipeline

// Files written by a run, removed again if a later stage fails.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
    if (created_dir_) std::filesystem::remove(dir_, ec);
  }

  void prepare() {
    if (!std::filesystem::exists(dir_)) {
      std::error_code ec;
      std::filesystem::create_directories(dir_, ec);
      if (ec) throw Error(ErrorKind::kIo, "cannot create '" + dir_.string() + "': " + ec.message());
      created_dir_ = true;
    }
  }
  void write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    written_.push_back(path);
    detail::write_file(path, content);
  }
  void commit() { committed_ = true; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
  bool created_dir_ = false;
  bool committed_ = false;
};

struct PipelineOptions {
  std::string gt_method = "exact";
  std::vector<std::string> backends{"ged-approx", "wl", "sp", "nh", "rw", "gs", "wl-hash"};
  std::vector<std::string> embeddings;
  std::string ks = "1,2,4";
  std::string binary_precision = "hit";
  std::size_t dim = Defaults::kEmbeddingDim;
  std::uint64_t seed = Defaults::kSeed;
  std::string out;
};

// Runs `fn` and prefixes any error with the stage name.
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), "stage '" + name + "': " + e.message());
  }
}

inline int run_pipeline(const DataOptions& data, const GedOptions& ged,
                        const KernelOptions& kopts, const PipelineOptions& p,
                        std::ostream& log) {
  const auto ks = parse_ks(p.ks);
  const std::size_t max_k = *std::max_element(ks.begin(), ks.end());
  const auto ds = stage("load", [&] { return data.dataset(); });
  const auto cm = stage("load", [&] { return data.cost_model(); });

  OutputSet outputs(p.out);
  outputs.prepare();

  auto ged_opts = ged.pairwise(data.workers);
  std::map<std::string, LabeledMatrix> ged_cache;
  auto ged_matrix = [&](const std::string& method) -> const LabeledMatrix& {
    auto it = ged_cache.find(method);
    if (it != ged_cache.end()) return it->second;
    auto o = ged_opts;
    o.method = parse_ged_method(method);
    log << "computing " << method << " GED matrix over " << ds.size() << " graphs\n";
    return ged_cache.emplace(method, pairwise_ged_matrix(ds, cm, o)).first->second;
  };

  const auto gt = stage("ground-truth", [&] {
    return ground_truth_ranks(ds, ged_matrix(p.gt_method), data.workers);
  });
  outputs.write("ranks_ground-truth.json", rank_table_to_json(gt.ranks).dump(1) + "\n");

  nlohmann::ordered_json backend_params = nlohmann::ordered_json::object();
  std::vector<MetricReport> reports;
  auto evaluate_backend = [&](const ScoreBackend& backend) {
    const auto ranks = backend_ranks(ds, backend, max_k, data.workers);
    outputs.write("ranks_" + backend.tag() + ".json", rank_table_to_json(ranks).dump(1) + "\n");
    reports.push_back(evaluate(gt, ranks, ks, parse_binary_precision(p.binary_precision)));
  };

  for (const auto& name : p.backends) {
    stage(name, [&] {
      log << "backend " << name << "\n";
      if (name == "ged-approx" || name == "ged-exact") {
        const std::string method = name.substr(4);
        evaluate_backend(ScoreBackend::distances(ged_matrix(method), name));
        backend_params[name] = {{"method", method}};
      } else if (name == "wl-hash") {
        auto cfg = kopts.config("wl");
        const auto table = wl_feature_embedding(ds, cfg, p.dim, p.seed, data.workers);
        evaluate_backend(ScoreBackend::embeddings(table, name));
        backend_params[name] = {{"wl_iterations", cfg.wl_iterations},
                                {"dim", p.dim},
                                {"seed", p.seed}};
      } else {
        const auto g = gram(ds, kopts.config(name), !kopts.raw, data.workers);
        evaluate_backend(ScoreBackend::gram(g, name));
        auto j = g.config.to_json();
        j["normalized"] = g.normalized;
        backend_params[name] = std::move(j);
      }
    });
  }
  nlohmann::ordered_json embedding_inputs = nlohmann::ordered_json::array();
  for (const auto& path : p.embeddings) {
    stage("embeddings " + path, [&] {
      auto table = load_embeddings(path);
      const std::string tag = table.source_tag();
      evaluate_backend(ScoreBackend::embeddings(std::move(table), tag));
      embedding_inputs.push_back({{"path", path}, {"sha256", file_digest(path)}});
    });
  }

  stage("report", [&] {
    outputs.write("metrics_topk.csv", metrics_csv(reports, RelevanceMode::kTopK));
    outputs.write("metrics_binary.csv", metrics_csv(reports, RelevanceMode::kBinary));

    nlohmann::ordered_json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["inputs"] = {
        {"graphs", {{"path", data.graphs}, {"sha256", file_digest(data.graphs)}}},
        {"labels", {{"path", data.labels}, {"sha256", file_digest(data.labels)}}},
        {"taxonomy", {{"path", data.taxonomy}, {"sha256", file_digest(data.taxonomy)}}},
        {"embeddings", embedding_inputs}};
    manifest["parameters"] = {{"cost", data.cost_params()},
                              {"ground_truth_method", p.gt_method},
                              {"node_budget", ged.node_budget},
                              {"ks", ks},
                              {"binary_precision", p.binary_precision},
                              {"backends", backend_params}};
    manifest["dataset"] = {{"graphs", ds.size()}, {"classes", ds.classes().size()}};
    manifest["outputs"] = nlohmann::ordered_json::array();
    manifest["outputs"].push_back("ranks_ground-truth.json");
    for (const auto& r : reports) manifest["outputs"].push_back("ranks_" + r.backend + ".json");
    manifest["outputs"].push_back("metrics_topk.csv");
    manifest["outputs"].push_back("metrics_binary.csv");
    outputs.write("manifest.json", manifest.dump(2) + "\n");
  });
  outputs.commit();
  log << "wrote " << reports.size() << " backend report(s) to " << p.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counterfactual scene-graph retrieval with taxonomy-aware graph edit distance",
               "cfged"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  DataOptions data;
  GedOptions ged;
  KernelOptions kopts;

  // ged
  auto* ged_cmd = app.add_subcommand("ged", "Edit distance between two graphs");
  std::string ged_a, ged_b;
  bool show_path = false;
  data.add_dataset(ged_cmd);
  data.add_taxonomy(ged_cmd);
  ged.add(ged_cmd, false);
  ged_cmd->add_option("--a", ged_a, "Source graph id")->required();
  ged_cmd->add_option("--b", ged_b, "Target graph id")->required();
  ged_cmd->add_flag("--path", show_path, "Also print the edit path as JSON");

  // matrix
  auto* matrix_cmd = app.add_subcommand("matrix", "All-pairs GED matrix");
  std::string matrix_out;
  data.add_dataset(matrix_cmd);
  data.add_taxonomy(matrix_cmd);
  ged.add(matrix_cmd, true);
  matrix_cmd->add_option("--out", matrix_out, "Output .csv or .bin")->required();

  // gram
  auto* gram_cmd = app.add_subcommand("gram", "Kernel Gram matrix");
  std::string gram_out;
  data.add_dataset(gram_cmd);
  kopts.add(gram_cmd, true);
  gram_cmd->add_option("--out", gram_out, "Output .csv or .bin")->required();

  // embed
  auto* embed_cmd = app.add_subcommand("embed", "WL feature-hashing embeddings");
  std::string embed_out;
  std::size_t embed_dim = Defaults::kEmbeddingDim;
  std::uint64_t embed_seed = Defaults::kSeed;
  data.add_dataset(embed_cmd);
  embed_cmd->add_option("--wl-iterations", kopts.cfg.wl_iterations)->capture_default_str();
  embed_cmd->add_option("--dim", embed_dim)->capture_default_str();
  embed_cmd->add_option("--seed", embed_seed)->capture_default_str();
  embed_cmd->add_option("--out", embed_out, "Output CSV")->required();

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "Different-class retrieval ranks from a backend");
  std::string rank_matrix, rank_embeddings, rank_direction = "ascending", rank_tag, rank_out;
  std::size_t rank_k = 0;
  data.add_dataset(rank_cmd);
  auto* rm = rank_cmd->add_option("--matrix", rank_matrix, "Distance or similarity matrix")
                 ->check(CLI::ExistingFile);
  auto* re = rank_cmd->add_option("--embeddings", rank_embeddings, "Embedding CSV")
                 ->check(CLI::ExistingFile);
  rm->excludes(re);
  rank_cmd->add_option("--direction", rank_direction, "Matrix scores: ascending or descending")
      ->check(CLI::IsMember({"ascending", "descending"}))
      ->capture_default_str();
  rank_cmd->add_option("--k", rank_k, "Truncate lists to k (0 keeps all)")->capture_default_str();
  rank_cmd->add_option("--tag", rank_tag, "Backend tag (default: file stem)");
  rank_cmd->add_option("--out", rank_out, "Rank JSON")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "P@k and NDCG@k against a GED ground truth");
  std::string eval_gt, eval_topk, eval_binary, eval_ks = "1,2,4", eval_precision = "hit";
  std::vector<std::string> eval_ranks;
  data.add_dataset(eval_cmd);
  eval_cmd->add_option("--gt-matrix", eval_gt, "Ground-truth GED matrix")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--ranks", eval_ranks, "Rank JSON files")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--ks", eval_ks, "Comma-separated k values")->capture_default_str();
  eval_cmd->add_option("--binary-precision", eval_precision, "hit (hit rate) or fraction")
      ->check(CLI::IsMember({"hit", "fraction"}))
      ->capture_default_str();
  eval_cmd->add_option("--out-topk", eval_topk, "Top-k relevance CSV (default: stdout)");
  eval_cmd->add_option("--out-binary", eval_binary, "Binary relevance CSV (default: stdout)");

  // explain
  auto* explain_cmd = app.add_subcommand("explain", "Counterfactual graph and its edit path");
  std::string explain_query;
  data.add_dataset(explain_cmd);
  data.add_taxonomy(explain_cmd);
  ged.add(explain_cmd, false);
  explain_cmd->add_option("--query", explain_query, "Query graph id")->required();

  // split
  auto* split_cmd = app.add_subcommand("split", "Dense or random subset of a dataset");
  std::string split_mode = "random", split_graphs_out, split_labels_out;
  std::size_t split_n = Defaults::kSplitSize;
  std::uint64_t split_seed = Defaults::kSeed;
  DenseSplitThresholds thresholds{Defaults::kDenseMaxNodes, Defaults::kDenseMinDensity,
                                  Defaults::kDenseMaxIsolated};
  data.add_dataset(split_cmd);
  split_cmd->add_option("--mode", split_mode, "dense or random")
      ->check(CLI::IsMember({"dense", "random"}))
      ->capture_default_str();
  split_cmd->add_option("--n", split_n)->capture_default_str();
  split_cmd->add_option("--seed", split_seed)->capture_default_str();
  split_cmd->add_option("--max-nodes", thresholds.max_nodes)->capture_default_str();
  split_cmd->add_option("--min-density", thresholds.min_density)->capture_default_str();
  split_cmd->add_option("--max-isolated", thresholds.max_isolated_fraction)->capture_default_str();
  split_cmd->add_option("--out-graphs", split_graphs_out)->required();
  split_cmd->add_option("--out-labels", split_labels_out)->required();

  // pipeline
  auto* pipe_cmd = app.add_subcommand("pipeline", "Ground truth, backends, ranks and metrics");
  PipelineOptions pipe;
  data.add_dataset(pipe_cmd);
  data.add_taxonomy(pipe_cmd);
  pipe_cmd->add_option("--node-budget", ged.node_budget)->capture_default_str();
  pipe_cmd->add_option("--gt-method", pipe.gt_method, "Ground-truth GED: exact or approx")
      ->check(CLI::IsMember({"exact", "approx"}))
      ->capture_default_str();
  pipe_cmd->add_option("--backends", pipe.backends, "ged-approx, ged-exact, wl, sp, nh, rw, gs, wl-hash")
      ->delimiter(',')
      ->check(CLI::IsMember({"ged-approx", "ged-exact", "wl", "sp", "nh", "rw", "gs", "wl-hash"}))
      ->capture_default_str();
  pipe_cmd->add_option("--embeddings", pipe.embeddings, "Extra embedding CSVs (tag = file stem)")
      ->check(CLI::ExistingFile);
  pipe_cmd->add_option("--ks", pipe.ks)->capture_default_str();
  pipe_cmd->add_option("--binary-precision", pipe.binary_precision)
      ->check(CLI::IsMember({"hit", "fraction"}))
      ->capture_default_str();
  pipe_cmd->add_option("--dim", pipe.dim, "wl-hash embedding width")->capture_default_str();
  pipe_cmd->add_option("--seed", pipe.seed, "wl-hash seed")->capture_default_str();
  kopts.add(pipe_cmd, false);
  pipe_cmd->add_option("--out", pipe.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageExit;
  }

  try {
    if (*ged_cmd) {
      const auto ds = data.dataset();
      const auto cm = data.cost_model();
      const auto& a = graph_by_id(ds, ged_a);
      const auto& b = graph_by_id(ds, ged_b);
      const auto r = ged.method == "exact" ? exact_ged(a, b, cm, ged.node_budget)
                                           : approx_ged(a, b, cm);
      out << format_double(r.cost) << "\n";
      if (show_path) out << to_json(r.path).dump(2) << "\n";
    } else if (*matrix_cmd) {
      const auto ds = data.dataset();
      const auto m = pairwise_ged_matrix(ds, data.cost_model(), ged.pairwise(data.workers));
      save_matrix(m, matrix_out);
    } else if (*gram_cmd) {
      const auto g = gram(data.dataset(), kopts.config(kopts.kind), !kopts.raw, data.workers);
      save_matrix(g.labeled(), gram_out);
    } else if (*embed_cmd) {
      KernelConfig cfg = kopts.config("wl");
      const auto t = wl_feature_embedding(data.dataset(), cfg, embed_dim, embed_seed, data.workers);
      save_embeddings(t, embed_out);
    } else if (*rank_cmd) {
      if (rank_matrix.empty() == rank_embeddings.empty())
        throw Error(ErrorKind::kSpec, "rank needs exactly one of --matrix or --embeddings");
      const auto ds = data.dataset();
      const std::string source = rank_matrix.empty() ? rank_embeddings : rank_matrix;
      const std::string tag =
          rank_tag.empty() ? std::filesystem::path(source).stem().string() : rank_tag;
      std::optional<ScoreBackend> backend;
      if (!rank_matrix.empty()) {
        const auto m = load_matrix(rank_matrix);
        backend = parse_direction(rank_direction) == ScoreDirection::kAscending
                      ? ScoreBackend::distances(m, tag)
                      : ScoreBackend::similarities(m, tag);
      } else {
        auto table = load_embeddings(rank_embeddings);
        backend = ScoreBackend::embeddings(std::move(table), tag);
      }
      save_rank_table(backend_ranks(ds, *backend, rank_k, data.workers), rank_out);
    } else if (*eval_cmd) {
      const auto ds = data.dataset();
      const auto gt = ground_truth_ranks(ds, load_matrix(eval_gt), data.workers);
      const auto ks = parse_ks(eval_ks);
      std::vector<MetricReport> reports;
      for (const auto& path : eval_ranks)
        reports.push_back(evaluate(gt, load_rank_table(path), ks,
                                   parse_binary_precision(eval_precision)));
      const auto topk = metrics_csv(reports, RelevanceMode::kTopK);
      const auto binary = metrics_csv(reports, RelevanceMode::kBinary);
      if (eval_topk.empty()) out << "# topk\n" << topk;
      else detail::write_file(eval_topk, topk);
      if (eval_binary.empty()) out << "# binary\n" << binary;
      else detail::write_file(eval_binary, binary);
    } else if (*explain_cmd) {
      const auto ds = data.dataset();
      const auto cm = data.cost_model();
      const auto& query = graph_by_id(ds, explain_query);
      const auto m = pairwise_ged_matrix(ds, cm, ged.pairwise(data.workers));
      const auto cf = counterfactual(explain_query, ds, m);
      const auto& target = graph_by_id(ds, cf.id);
      const auto r = ged.method == "exact" ? exact_ged(query, target, cm, ged.node_budget)
                                           : approx_ged(query, target, cm);
      const auto check = replay(query, r.path, target);
      nlohmann::ordered_json j;
      j["query"] = {{"id", query.id}, {"label", ds.label_of(query.id)}};
      j["counterfactual"] = {{"id", target.id}, {"label", ds.label_of(target.id)}};
      j["method"] = ged.method;
      j["cost"] = r.cost;
      j["edit_path"] = to_json(r.path);
      j["replay_ok"] = check.ok;
      out << j.dump(2) << "\n";
      if (!check) throw Error(ErrorKind::kConsistency, "edit path replay failed: " + check.reason);
    } else if (*split_cmd) {
      const auto ds = data.dataset();
      const auto sub = split_mode == "dense" ? split_dense(ds, thresholds, split_n)
                                             : split_random(ds, split_n, split_seed);
      save_dataset(sub, split_graphs_out, split_labels_out);
      out << sub.size() << " graphs\n";
    } else if (*pipe_cmd) {
      return run_pipeline(data, ged, kopts, pipe, err);
    }
  } catch (const Error& e) {
    err << "cfged: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "cfged: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace cfged::cli
