#include <map>
#include <random>

#include <gtest/gtest.h>

#include "cfged/kernels.hpp"
#include "test_support.hpp"

namespace cfged {
namespace {

using testing::single_node;

KernelConfig config(KernelKind kind) {
  KernelConfig c;
  c.kind = kind;
  return c;
}

SceneGraph triangle() {
  return SceneGraph{"tri", {{"a", "dog"}, {"b", "dog"}, {"c", "dog"}},
                    {{"a", "b", "near"}, {"b", "c", "near"}, {"c", "a", "near"}}};
}

SceneGraph path3() {
  return SceneGraph{"path", {{"a", "dog"}, {"b", "dog"}, {"c", "dog"}},
                    {{"a", "b", "near"}, {"b", "c", "near"}}};
}

// WL with nested signature strings as labels instead of a relabel table.
double wl_oracle(const SceneGraph& g1, const SceneGraph& g2, int iterations) {
  auto histograms = [&](const SceneGraph& g) {
    const auto pos = node_positions(g);
    std::vector<std::vector<std::size_t>> nbrs(g.nodes.size());
    for (const auto& e : g.edges) {
      nbrs[pos.at(e.source)].push_back(pos.at(e.target));
      nbrs[pos.at(e.target)].push_back(pos.at(e.source));
    }
    std::vector<std::string> label;
    for (const auto& n : g.nodes) label.push_back(n.concept_name);
    std::vector<std::map<std::string, int>> out(iterations + 1);
    for (const auto& l : label) ++out[0][l];
    for (int it = 1; it <= iterations; ++it) {
      std::vector<std::string> next;
      for (std::size_t v = 0; v < label.size(); ++v) {
        std::vector<std::string> around;
        for (auto u : nbrs[v]) around.push_back(label[u]);
        std::sort(around.begin(), around.end());
        std::string s = "(" + label[v] + ":";
        for (const auto& a : around) s += a + ";";
        next.push_back(s + ")");
      }
      label = next;
      for (const auto& l : label) ++out[it][l];
    }
    return out;
  };
  const auto h1 = histograms(g1);
  const auto h2 = histograms(g2);
  double k = 0.0;
  for (int it = 0; it <= iterations; ++it)
    for (const auto& [l, c] : h1[it]) {
      auto f = h2[it].find(l);
      if (f != h2[it].end()) k += c * f->second;
    }
  return k;
}

// sum_{k=1..terms} lambda^k 1' (A1 (x) A2)^k 1 with an explicit product.
double rw_series(const SceneGraph& g1, const SceneGraph& g2, double lambda, int terms) {
  const Eigen::MatrixXd a1 = rw_adjacency(g1);
  const Eigen::MatrixXd a2 = rw_adjacency(g2);
  Eigen::MatrixXd ax(a1.rows() * a2.rows(), a1.cols() * a2.cols());
  for (Eigen::Index i = 0; i < a1.rows(); ++i)
    for (Eigen::Index j = 0; j < a1.cols(); ++j)
      ax.block(i * a2.rows(), j * a2.cols(), a2.rows(), a2.cols()) = a1(i, j) * a2;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(ax.rows());
  double s = 0.0, scale = 1.0;
  for (int k = 1; k <= terms; ++k) {
    v = ax * v;
    scale *= lambda;
    s += scale * v.sum();
  }
  return s;
}

TEST(WlKernel, EqualSingleNodes) {
  auto c = config(KernelKind::kWL);
  for (int h : {1, 2, 3, 5}) {
    c.wl_iterations = h;
    EXPECT_EQ(kernel(single_node("a", "dog"), single_node("b", "dog"), c), h + 1.0);
  }
  EXPECT_EQ(kernel(single_node("a", "dog"), single_node("b", "cat"), c), 0.0);
}

TEST(WlKernel, MatchesStringOracle) {
  std::mt19937_64 rng(1);
  testing::RandomGraphSpec spec;
  spec.max_nodes = 7;
  for (int trial = 0; trial < 50; ++trial) {
    const auto g1 = testing::random_graph(rng, "a", spec);
    const auto g2 = testing::random_graph(rng, "b", spec);
    KernelConfig c = config(KernelKind::kWL);
    c.wl_iterations = 1 + trial % 4;
    EXPECT_EQ(kernel(g1, g2, c), wl_oracle(g1, g2, c.wl_iterations));
    // Content-hashed features agree with the table-based ones.
    EXPECT_EQ(dot(wl_feature_hashes(g1, c.wl_iterations), wl_feature_hashes(g2, c.wl_iterations)),
              wl_oracle(g1, g2, c.wl_iterations));
  }
}

TEST(SpKernel, SingleEdge) {
  const SceneGraph g{"e", {{"a", "dog"}, {"b", "cat"}}, {{"a", "b", "chase"}}};
  EXPECT_EQ(kernel(g, g, config(KernelKind::kSP)), 1.0);
  const SceneGraph reversed{"r", {{"x", "cat"}, {"y", "dog"}}, {{"x", "y", "near"}}};
  EXPECT_EQ(kernel(g, reversed, config(KernelKind::kSP)), 1.0);
  EXPECT_EQ(kernel(single_node("a", "dog"), g, config(KernelKind::kSP)), 0.0);
}

TEST(SpKernel, PathCounts) {
  // Pairs at distance 1 (twice) and 2 (once), all dog-dog.
  EXPECT_EQ(kernel(path3(), path3(), config(KernelKind::kSP)), 5.0);
  EXPECT_EQ(kernel(triangle(), path3(), config(KernelKind::kSP)), 6.0);
}

TEST(NhKernel, SharedLabelWithoutIterations) {
  auto c = config(KernelKind::kNH);
  c.nh_iterations = 0;
  const SceneGraph g1{"1", {{"a", "dog"}, {"b", "cat"}}, {}};
  const SceneGraph g2{"2", {{"a", "dog"}, {"b", "car"}}, {}};
  EXPECT_DOUBLE_EQ(kernel(g1, g2, c), 1.0 / 3.0);
}

TEST(NhKernel, RangeAndIdentity) {
  std::mt19937_64 rng(7);
  for (int bits : {16, 32, 64}) {
    auto c = config(KernelKind::kNH);
    c.nh_bits = bits;
    for (int trial = 0; trial < 20; ++trial) {
      const auto g1 = testing::random_graph(rng, "a");
      const auto g2 = testing::random_graph(rng, "b");
      const double k = kernel(g1, g2, c);
      EXPECT_GE(k, 0.0);
      EXPECT_LE(k, 1.0);
      EXPECT_EQ(kernel(g1, g1, c), 1.0);
      for (auto h : nh_hashes(g1, c.nh_iterations, bits)) EXPECT_EQ(h & ~nh_mask(bits), 0u);
    }
  }
}

TEST(RwKernel, MatchesSeries) {
  std::mt19937_64 rng(5);
  testing::RandomGraphSpec spec;
  spec.max_nodes = 6;
  for (int trial = 0; trial < 30; ++trial) {
    const auto g1 = testing::random_graph(rng, "a", spec);
    const auto g2 = testing::random_graph(rng, "b", spec);
    const double d1 = max_degree(rw_adjacency(g1)), d2 = max_degree(rw_adjacency(g2));
    const double lambda = default_rw_lambda(d1, d2);
    EXPECT_NEAR(kernel(g1, g2, config(KernelKind::kRW)), rw_series(g1, g2, lambda, 20), 1e-6);
  }
}

TEST(RwKernel, DivergentLambda) {
  auto c = config(KernelKind::kRW);
  c.rw_lambda = 0.6;
  try {
    kernel(triangle(), triangle(), c);  // max degree 2, so lambda must be < 0.25
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDivergence);
  }
  c.rw_lambda = 0.1;
  EXPECT_NEAR(kernel(triangle(), triangle(), c), rw_series(triangle(), triangle(), 0.1, 400), 1e-9);
}

TEST(GsKernel, ClassCounts) {
  EXPECT_EQ(graphlet_classes(3).class_count(), 4);
  EXPECT_EQ(graphlet_classes(4).class_count(), 11);
  EXPECT_EQ(graphlet_classes(5).class_count(), 34);
}

TEST(GsKernel, TriangleVersusPath) {
  auto c = config(KernelKind::kGS);
  c.gs_graphlet_size = 3;
  EXPECT_EQ(kernel(triangle(), path3(), c), 0.0);
  EXPECT_EQ(kernel(triangle(), triangle(), c), 1.0);
  // Both too small for 4-node graphlets.
  c.gs_graphlet_size = 4;
  EXPECT_EQ(kernel(triangle(), path3(), c), 1.0);
}

TEST(GsKernel, SamplingIsSeeded) {
  std::mt19937_64 rng(3);
  testing::RandomGraphSpec spec;
  spec.min_nodes = spec.max_nodes = 15;
  const auto g = testing::random_graph(rng, "g", spec);
  const auto a = graphlet_distribution(g, 4, 50, 11);
  EXPECT_EQ(a, graphlet_distribution(g, 4, 50, 11));
  double total = 0.0;
  for (double x : a) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(binomial_saturating(15, 4), 1365u);
  EXPECT_EQ(binomial_saturating(200, 100), UINT64_MAX);
}

TEST(KernelConfig, Validation) {
  auto c = config(KernelKind::kWL);
  c.wl_iterations = 0;
  EXPECT_THROW(c.validate(), Error);
  c = config(KernelKind::kNH);
  c.nh_bits = 12;
  EXPECT_THROW(c.validate(), Error);
  c = config(KernelKind::kGS);
  c.gs_graphlet_size = 6;
  EXPECT_THROW(c.validate(), Error);
  EXPECT_EQ(parse_kernel_kind("wl"), KernelKind::kWL);
  EXPECT_EQ(parse_kernel_kind("GS"), KernelKind::kGS);
  EXPECT_THROW(parse_kernel_kind("svm"), Error);
}

TEST(Gram, PropertiesAcrossKernels) {
  std::mt19937_64 rng(13);
  testing::RandomGraphSpec spec;
  spec.max_nodes = 8;
  const auto ds = testing::random_dataset(rng, 30, 3, spec);
  for (auto kind : {KernelKind::kWL, KernelKind::kSP, KernelKind::kNH, KernelKind::kRW,
                    KernelKind::kGS}) {
    const auto g = gram(ds, config(kind), true, 2);
    ASSERT_EQ(g.values.rows(), 30);
    EXPECT_EQ(g.graph_ids, g.labeled().ids);
    EXPECT_TRUE((g.values.array() == g.values.transpose().array()).all()) << to_string(kind);
    for (Eigen::Index i = 0; i < 30; ++i) EXPECT_EQ(g.values(i, i), 1.0);
    EXPECT_TRUE((g.values.array() >= 0.0).all());
    EXPECT_TRUE((g.values.array() <= 1.0 + 1e-12).all()) << to_string(kind);
  }
}

TEST(Gram, PositiveSemidefinite) {
  std::mt19937_64 rng(19);
  testing::RandomGraphSpec spec;
  spec.max_nodes = 10;
  const auto ds = testing::random_dataset(rng, 40, 4, spec);
  for (auto kind : {KernelKind::kWL, KernelKind::kSP, KernelKind::kRW, KernelKind::kGS}) {
    for (bool normalize : {false, true}) {
      const auto g = gram(ds, config(kind), normalize, 1);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.values);
      EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-8) << to_string(kind);
    }
  }
}

TEST(Gram, MatchesPairwiseKernel) {
  std::mt19937_64 rng(23);
  const auto ds = testing::random_dataset(rng, 12, 2);
  for (auto kind : {KernelKind::kWL, KernelKind::kSP, KernelKind::kNH, KernelKind::kGS}) {
    const auto g = gram(ds, config(kind), false, 3);
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = 0; j < ds.size(); ++j)
        EXPECT_DOUBLE_EQ(g.values(i, j), kernel(ds[i], ds[j], config(kind)));
  }
}

TEST(Gram, RecordsResolvedLambda) {
  std::mt19937_64 rng(29);
  const auto ds = testing::random_dataset(rng, 10, 2);
  const auto g = gram(ds, config(KernelKind::kRW), false, 1);
  ASSERT_TRUE(g.config.rw_lambda.has_value());
  EXPECT_GT(*g.config.rw_lambda, 0.0);
  EXPECT_LE(*g.config.rw_lambda, 0.01);
}

TEST(Kernels, PermutationInvariant) {
  std::mt19937_64 rng(31);
  testing::RandomGraphSpec spec;
  spec.max_nodes = 7;
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = testing::random_graph(rng, "g", spec);
    const auto h = testing::random_graph(rng, "h", spec);
    const auto p = testing::permuted_copy(g, rng, "p");
    for (auto kind : {KernelKind::kWL, KernelKind::kSP, KernelKind::kNH, KernelKind::kRW,
                      KernelKind::kGS})
      EXPECT_NEAR(kernel(g, h, config(kind)), kernel(p, h, config(kind)), 1e-9)
          << to_string(kind);
  }
}

}  // namespace
}  // namespace cfged
