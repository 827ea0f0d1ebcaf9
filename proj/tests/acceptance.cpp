// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "test_support.hpp"

namespace cfged {
namespace {

constexpr double kExactTol = 1e-9;        // criteria 1, 2
constexpr double kPathSumTol = 1e-12;     // criterion 3
constexpr double kNdcgTol = 1e-4;         // criterion 6
constexpr double kEigenTol = -1e-8;       // criterion 8
constexpr double kRwSeriesTol = 1e-6;     // criterion 8
constexpr double kCubicLow = 8.0 / 4.0;   // criterion 9: 2^3 within a factor of 4
constexpr double kCubicHigh = 8.0 * 4.0;
constexpr double kMatrixBudgetSeconds = 600.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome exact_matches_oracle() {
  const CostModel cm(testing::ten_concept_taxonomy());
  std::mt19937_64 rng(101);
  testing::RandomGraphSpec spec;
  spec.max_nodes = 4;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto g1 = testing::random_graph(rng, "a", spec);
    const auto g2 = testing::random_graph(rng, "b", spec);
    worst = std::max(worst, std::abs(exact_ged(g1, g2, cm).cost -
                                     testing::exhaustive_ged(g1, g2, cm)));
  }
  return {worst <= kExactTol, "200 pairs, max |exact - exhaustive| = " + format_double(worst)};
}

Outcome approx_dominates() {
  const CostModel cm(testing::ten_concept_taxonomy());
  std::mt19937_64 rng(102);
  testing::RandomGraphSpec spec;
  spec.max_nodes = 6;
  int violations = 0, permuted_mismatch = 0, strictly_above = 0;
  for (int i = 0; i < 200; ++i) {
    const auto g1 = testing::random_graph(rng, "a", spec);
    const auto g2 = testing::random_graph(rng, "b", spec);
    const double a = approx_ged(g1, g2, cm).cost;
    const double e = exact_ged(g1, g2, cm).cost;
    if (a < e - kExactTol) ++violations;
    if (a > e + kExactTol) ++strictly_above;
    const auto p = testing::permuted_copy(g1, rng, "p");
    if (std::abs(approx_ged(g1, p, cm).cost - exact_ged(g1, p, cm).cost) > kExactTol)
      ++permuted_mismatch;
  }
  return {violations == 0 && permuted_mismatch == 0,
          "200 pairs, violations " + std::to_string(violations) + ", approx > exact on " +
              std::to_string(strictly_above) + ", permuted-copy mismatches " +
              std::to_string(permuted_mismatch)};
}

Outcome edit_paths_replay() {
  const CostModel cm(testing::ten_concept_taxonomy());
  std::mt19937_64 rng(103);
  testing::RandomGraphSpec spec;
  spec.max_nodes = 8;
  spec.edge_factor = 1.5;
  int failures = 0;
  double worst = 0.0;
  std::string first_reason;
  for (int i = 0; i < 200; ++i) {
    const auto g1 = testing::random_graph(rng, "a", spec);
    const auto g2 = testing::random_graph(rng, "b", spec);
    const auto r = approx_ged(g1, g2, cm);
    const auto check = replay(g1, r.path, g2);
    if (!check) {
      ++failures;
      if (first_reason.empty()) first_reason = check.reason;
    }
    worst = std::max(worst, std::abs(r.path.total_cost - sum_op_costs(r.path)));
  }
  return {failures == 0 && worst <= kPathSumTol,
          "200 pairs, replay failures " + std::to_string(failures) +
              (first_reason.empty() ? "" : " (" + first_reason + ")") +
              ", max |total - sum(ops)| = " + format_double(worst)};
}

Outcome lap_optimal() {
  std::mt19937_64 rng(104);
  std::uniform_int_distribution<int> size(1, 6), integer(0, 50), eighths(0, 400);
  int mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    const int n = size(rng);
    Eigen::MatrixXd c(n, n);
    // Integers and multiples of 1/8 keep every permutation sum exact.
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) c(r, s) = i % 2 ? integer(rng) : eighths(rng) / 8.0;
    if (solve_lap(c).total != testing::brute_force_lap(c)) ++mismatches;
  }
  return {mismatches == 0, "500 matrices up to 6x6, mismatches " + std::to_string(mismatches)};
}

Outcome counterfactual_oracle() {
  std::mt19937_64 rng(105);
  const auto ds = testing::random_dataset(rng, 20, 3);
  const CostModel cm(testing::ten_concept_taxonomy());
  PairwiseOptions opts;
  opts.method = GedMethod::kExact;
  const auto m = pairwise_ged_matrix(ds, cm, opts);
  int mismatches = 0, same_class = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::string best;
    double best_cost = 0.0;
    for (std::size_t j = 0; j < ds.size(); ++j) {
      if (ds.label_at(j) == ds.label_at(i)) continue;
      const double c = m.values(i, j);
      if (best.empty() || c < best_cost || (c == best_cost && ds[j].id < best)) {
        best = ds[j].id;
        best_cost = c;
      }
    }
    const auto cf = counterfactual(ds[i].id, ds, m);
    if (cf.id != best || cf.score != best_cost) ++mismatches;
    if (ds.label_of(cf.id) == ds.label_at(i)) ++same_class;
  }
  return {mismatches == 0 && same_class == 0,
          "20 queries, mismatches " + std::to_string(mismatches) + ", same-class results " +
              std::to_string(same_class)};
}

Outcome metric_hand_values() {
  const std::vector<std::string> retrieved{"g7", "g2", "g3", "g5"};
  const std::set<std::string> relevant{"g3", "g7", "g1", "g9"};
  const double p = precision_at_k(retrieved, relevant, 4);
  const double n = ndcg_at_k(retrieved, relevant, 4);
  const double b = ndcg_at_k(retrieved, {"g3"}, 4);
  return {p == 0.5 && std::abs(n - 0.5856) <= kNdcgTol && b == 0.5,
          "P@4 = " + format_double(p) + ", NDCG@4 = " + format_double(n) +
              ", binary NDCG@4 = " + format_double(b)};
}

Outcome binary_definitions() {
  std::mt19937_64 rng(107);
  const auto ds = testing::random_dataset(rng, 40, 4);
  const CostModel cm(testing::ten_concept_taxonomy());
  const auto gt = ground_truth_ranks(ds, pairwise_ged_matrix(ds, cm), 1);
  std::vector<RankTable> tables;
  for (auto kind : {KernelKind::kWL, KernelKind::kSP, KernelKind::kNH, KernelKind::kGS}) {
    KernelConfig cfg;
    cfg.kind = kind;
    tables.push_back(
        backend_ranks(ds, ScoreBackend::gram(gram(ds, cfg, true, 1), "k"), 8, 1));
  }
  for (int t = 0; t < 20; ++t) {
    RankTable shuffled = gt.ranks;
    for (auto& q : shuffled.queries) std::shuffle(q.candidates.begin(), q.candidates.end(), rng);
    tables.push_back(shuffled);
  }
  int identity_failures = 0, monotone_failures = 0;
  for (const auto& table : tables) {
    const auto r = evaluate(gt, table, {1, 2, 3, 4, 6, 8});
    if (r.binary.precision.at(1) != r.topk.precision.at(1)) ++identity_failures;
    double prev = -1.0;
    for (auto k : r.ks) {
      if (r.binary.precision.at(k) < prev) ++monotone_failures;
      prev = r.binary.precision.at(k);
    }
  }
  return {identity_failures == 0 && monotone_failures == 0,
          std::to_string(tables.size()) + " rank tables, P@1 identity failures " +
              std::to_string(identity_failures) + ", hit-rate decreases " +
              std::to_string(monotone_failures)};
}

Outcome kernel_soundness() {
  std::mt19937_64 rng(108);
  testing::RandomGraphSpec spec;
  spec.max_nodes = 8;
  const auto ds = testing::random_dataset(rng, 30, 3, spec);
  double min_eig = 1e300;
  bool unit_diag = true;
  for (auto kind : {KernelKind::kWL, KernelKind::kSP, KernelKind::kNH, KernelKind::kRW,
                    KernelKind::kGS}) {
    KernelConfig cfg;
    cfg.kind = kind;
    const auto normalized = gram(ds, cfg, true, 1);
    for (Eigen::Index i = 0; i < normalized.values.rows(); ++i)
      unit_diag = unit_diag && normalized.values(i, i) == 1.0;
    if (kind == KernelKind::kWL || kind == KernelKind::kSP) {
      const auto raw = gram(ds, cfg, false, 1);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(raw.values);
      min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
    }
  }
  // Random-walk solve against the truncated series at half the admissible lambda.
  double worst = 0.0, worst_converged = 0.0, worst_tail_bound = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = i; j < ds.size(); ++j) {
      const Eigen::MatrixXd a1 = rw_adjacency(ds[i]), a2 = rw_adjacency(ds[j]);
      const double d1 = max_degree(a1), d2 = max_degree(a2);
      if (d1 == 0 || d2 == 0) continue;
      const double lambda = 0.5 / (d1 * d2);
      Eigen::MatrixXd ax(a1.rows() * a2.rows(), a1.cols() * a2.cols());
      for (Eigen::Index r = 0; r < a1.rows(); ++r)
        for (Eigen::Index c = 0; c < a1.cols(); ++c)
          ax.block(r * a2.rows(), c * a2.cols(), a2.rows(), a2.cols()) = a1(r, c) * a2;
      Eigen::VectorXd v = Eigen::VectorXd::Ones(ax.rows());
      double series = 0.0, series20 = 0.0, scale = 1.0;
      for (int k = 1; k <= 400; ++k) {
        v = ax * v;
        scale *= lambda;
        series += scale * v.sum();
        if (k == 20) series20 = series;
      }
      const double solved = rw_kernel_from_adjacency(a1, a2, lambda);
      worst = std::max(worst, std::abs(solved - series20));
      worst_converged = std::max(worst_converged, std::abs(solved - series));
      // Terms past 20 are bounded by n1 n2 (lambda d1 d2)^k = n1 n2 2^-k.
      worst_tail_bound = std::max(
          worst_tail_bound, static_cast<double>(ax.rows()) * std::ldexp(1.0, -20));
    }
  return {min_eig >= kEigenTol && unit_diag && worst <= kRwSeriesTol,
          "min eigenvalue (WL, SP) " + format_double(min_eig) + ", unit diagonals " +
              (unit_diag ? "yes" : "no") + ", max |RW - 20-term series| " +
              format_double(worst) + " (truncation bound up to " +
              format_double(worst_tail_bound) + "), max |RW - 400-term series| " +
              format_double(worst_converged)};
}

double median_seconds(const std::function<void()>& fn, int repeats) {
  std::vector<double> t;
  for (int r = 0; r < repeats; ++r) {
    const auto start = Clock::now();
    fn();
    t.push_back(seconds_since(start));
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

Outcome scaling() {
  const CostModel cm(testing::ten_concept_taxonomy());
  std::mt19937_64 rng(109);
  auto pair_of = [&](std::size_t n) {
    testing::RandomGraphSpec spec;
    spec.min_nodes = spec.max_nodes = n;
    spec.edge_factor = 2.0;
    return std::make_pair(testing::random_graph(rng, "a", spec),
                          testing::random_graph(rng, "b", spec));
  };
  const auto small = pair_of(50);
  const auto large = pair_of(100);
  approx_ged(small.first, small.second, cm);  // warm the distance memo
  const double t50 = median_seconds([&] { approx_ged(small.first, small.second, cm); }, 15);
  const double t100 = median_seconds([&] { approx_ged(large.first, large.second, cm); }, 15);
  const double ratio = t100 / t50;

  testing::RandomGraphSpec spec;
  spec.max_nodes = 20;
  const auto ds = testing::random_dataset(rng, 500, 5, spec);
  const auto start = Clock::now();
  const auto m = pairwise_ged_matrix(ds, cm);
  const double full = seconds_since(start);
  std::ostringstream detail;
  detail << "t(100)/t(50) = " << format_double(ratio) << " (" << t50 * 1e3 << " ms vs "
         << t100 * 1e3 << " ms), 500x500 approx matrix in " << full << " s on "
         << default_workers() << " worker(s)";
  return {ratio >= kCubicLow && ratio <= kCubicHigh && full < kMatrixBudgetSeconds &&
              m.values.rows() == 500,
          detail.str()};
}

Outcome pipeline_determinism() {
  testing::TempDir dir;
  std::mt19937_64 rng(110);
  const auto ds = testing::random_dataset(rng, 20, 3);
  save_dataset(ds, dir / "g.json", dir / "l.csv");
  testing::write_text(dir / "t.tsv",
                      "animal\tentity\nartifact\tentity\nrelation\tentity\ndog\tanimal\n"
                      "cat\tanimal\ncar\tartifact\nboat\tartifact\nchase\trelation\n"
                      "near\trelation\n");
  auto run = [&](const std::string& out, const std::string& workers) {
    std::vector<std::string> args{"cfged", "pipeline", "--graphs", (dir / "g.json").string(),
                                  "--labels", (dir / "l.csv").string(), "--taxonomy",
                                  (dir / "t.tsv").string(), "--root", "entity", "--backends",
                                  "ged-approx,ged-exact,wl,sp,nh,rw,gs,wl-hash", "--workers",
                                  workers, "--out", (dir / out).string()};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream sink;
    return cli::run(static_cast<int>(argv.size()), argv.data(), sink, sink);
  };
  if (run("a", "1") != 0 || run("b", "4") != 0) return {false, "pipeline run failed"};
  int files = 0, differing = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir / "a")) {
    ++files;
    const auto name = entry.path().filename();
    if (!std::filesystem::exists(dir / "b" / name) ||
        detail::read_file(entry.path()) != detail::read_file(dir / "b" / name))
      ++differing;
  }
  return {files > 0 && differing == 0,
          std::to_string(files) + " files compared, " + std::to_string(differing) + " differ"};
}

}  // namespace
}  // namespace cfged

int main() {
  using namespace cfged;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact GED equals exhaustive oracle", exact_matches_oracle},
      {"approx GED upper-bounds exact", approx_dominates},
      {"edit paths replay and sum", edit_paths_replay},
      {"LAP equals brute force", lap_optimal},
      {"counterfactual equals matrix scan", counterfactual_oracle},
      {"metric hand values", metric_hand_values},
      {"binary P@1 identity and monotone hit rate", binary_definitions},
      {"kernel soundness", kernel_soundness},
      {"cubic scaling and 500x500 budget", scaling},
      {"pipeline determinism", pipeline_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("[%s] %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
