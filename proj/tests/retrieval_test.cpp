#include <random>

#include <gtest/gtest.h>

#include "cfged/ged.hpp"
#include "cfged/retrieval.hpp"
#include "test_support.hpp"

namespace cfged {
namespace {

using testing::single_node;

LabeledDataset four_graphs() {
  // q is class A; c2 shares its class.
  return LabeledDataset({single_node("q", "dog"), single_node("c1", "dog"),
                         single_node("c2", "dog"), single_node("c3", "dog")},
                        {{"q", "A"}, {"c1", "B"}, {"c2", "A"}, {"c3", "B"}});
}

LabeledMatrix four_distances() {
  LabeledMatrix m{{"q", "c1", "c2", "c3"}, Eigen::MatrixXd::Zero(4, 4)};
  const double d[4][4] = {{0, 0.3, 0.1, 0.2}, {0.3, 0, 0.5, 0.4}, {0.1, 0.5, 0, 0.6},
                          {0.2, 0.4, 0.6, 0}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m.values(i, j) = d[i][j];
  return m;
}

TEST(GroundTruth, HandSortedRow) {
  const auto gt = ground_truth_ranks(four_graphs(), four_distances(), 1);
  const auto* q = gt.ranks.find("q");
  ASSERT_NE(q, nullptr);
  ASSERT_EQ(q->candidates.size(), 2u);
  EXPECT_EQ(q->candidates[0], (ScoredId{"c3", 0.2}));
  EXPECT_EQ(q->candidates[1], (ScoredId{"c1", 0.3}));
  EXPECT_EQ(gt.ranks.direction, ScoreDirection::kAscending);
}

TEST(Counterfactual, ClassConstraintBeatsCost) {
  const auto cf = counterfactual("q", four_graphs(), four_distances());
  EXPECT_EQ(cf.id, "c3");
  EXPECT_EQ(cf.score, 0.2);
}

TEST(Counterfactual, TwoGraphs) {
  const CostModel cm(testing::toy_taxonomy());
  const LabeledDataset ds({single_node("a", "dog"), single_node("b", "cat")},
                          {{"a", "x"}, {"b", "y"}});
  const auto m = pairwise_ged_matrix(ds, cm);
  const auto cf = counterfactual("a", ds, m);
  EXPECT_EQ(cf.id, "b");
  EXPECT_DOUBLE_EQ(cf.score, 2.0 / 3.0);
}

TEST(Counterfactual, NoEligibleCandidate) {
  const LabeledDataset ds({single_node("a", "dog"), single_node("b", "dog"),
                           single_node("c", "dog")},
                          {{"a", "x"}, {"b", "x"}, {"c", "y"}});
  LabeledMatrix m{{"a", "b", "c"}, Eigen::MatrixXd::Zero(3, 3)};
  EXPECT_EQ(counterfactual("a", ds, m).id, "c");
  const LabeledDataset lonely({single_node("a", "dog"), single_node("b", "dog")},
                              {{"a", "x"}, {"b", "x"}});
  try {
    counterfactual("a", lonely, LabeledMatrix{{"a", "b"}, Eigen::MatrixXd::Zero(2, 2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEligibility);
  }
}

TEST(GroundTruth, EquidistantTiesByAscendingId) {
  std::vector<SceneGraph> gs{single_node("q", "dog")};
  std::map<std::string, std::string> labels{{"q", "A"}};
  for (auto id : {"z", "b", "m", "a"}) {
    gs.push_back(single_node(id, "dog"));
    labels[id] = "B";
  }
  const LabeledDataset ds(gs, labels);
  LabeledMatrix m{{"q", "z", "b", "m", "a"}, Eigen::MatrixXd::Ones(5, 5)};
  const auto gt = ground_truth_ranks(ds, m, 1);
  std::vector<std::string> order;
  for (const auto& c : gt.ranks.find("q")->candidates) order.push_back(c.id);
  EXPECT_EQ(order, (std::vector<std::string>{"a", "b", "m", "z"}));
}

TEST(GroundTruth, ShapeMismatch) {
  LabeledMatrix m{{"q", "c1"}, Eigen::MatrixXd::Zero(2, 2)};
  try {
    ground_truth_ranks(four_graphs(), m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShape);
  }
}

TEST(BackendRanks, CoverageGapNamesMissingIds) {
  const auto t = EmbeddingTable({"q", "c1"}, {{1.0}, {1.0}}, "e");
  try {
    backend_ranks(four_graphs(), ScoreBackend::embeddings(t, "e"), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kLookup);
    EXPECT_NE(std::string(e.what()).find("c2, c3"), std::string::npos) << e.what();
  }
}

TEST(BackendRanks, TruncationWithoutPadding) {
  const auto r = backend_ranks(four_graphs(), ScoreBackend::distances(four_distances(), "d"), 10);
  EXPECT_EQ(r.find("q")->candidates.size(), 2u);
  EXPECT_EQ(r.find("c1")->candidates.size(), 2u);
  const auto one = backend_ranks(four_graphs(), ScoreBackend::distances(four_distances(), "d"), 1);
  EXPECT_EQ(one.find("q")->candidates.size(), 1u);
}

TEST(BackendRanks, WlTwinRankedFirst) {
  const SceneGraph q{"q", {{"a", "dog"}, {"b", "cat"}}, {{"a", "b", "chase"}}};
  SceneGraph twin = q;
  twin.id = "twin";
  const LabeledDataset ds(
      {q, single_node("x", "dog"), twin, SceneGraph{"y", {{"a", "dog"}, {"b", "car"}},
                                                    {{"a", "b", "near"}}}},
      {{"q", "A"}, {"x", "B"}, {"twin", "B"}, {"y", "B"}});
  const auto g = gram(ds, KernelConfig{}, true, 1);
  const auto r = backend_ranks(ds, ScoreBackend::gram(g, "wl"), 3);
  EXPECT_EQ(r.find("q")->candidates[0], (ScoredId{"twin", 1.0}));
  EXPECT_EQ(r.direction, ScoreDirection::kDescending);
}

TEST(Retrieval, ClassExclusionAndEqTwoOracle) {
  std::mt19937_64 rng(41);
  const auto ds = testing::random_dataset(rng, 20, 3);
  const CostModel cm(testing::ten_concept_taxonomy());
  PairwiseOptions opts;
  opts.method = GedMethod::kExact;
  const auto m = pairwise_ged_matrix(ds, cm, opts);
  const auto gt = ground_truth_ranks(ds, m, 2);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& q = gt.ranks.queries[i];
    EXPECT_EQ(q.query_id, ds[i].id);
    // Linear scan of the row restricted to other classes.
    std::string best;
    double best_cost = 0.0;
    std::size_t eligible = 0;
    for (std::size_t j = 0; j < ds.size(); ++j) {
      if (ds.label_at(j) == ds.label_at(i)) continue;
      ++eligible;
      const double c = m.values(i, j);
      if (best.empty() || c < best_cost || (c == best_cost && ds[j].id < best)) {
        best = ds[j].id;
        best_cost = c;
      }
    }
    EXPECT_EQ(q.candidates.size(), eligible);
    for (std::size_t k = 0; k < q.candidates.size(); ++k) {
      EXPECT_NE(ds.label_of(q.candidates[k].id), ds.label_at(i));
      EXPECT_NE(q.candidates[k].id, q.query_id);
      if (k > 0) EXPECT_LE(q.candidates[k - 1].score, q.candidates[k].score);
    }
    const auto cf = counterfactual(ds[i].id, ds, m);
    EXPECT_EQ(cf.id, best);
    EXPECT_EQ(cf, q.candidates.front());
  }
  // The ground-truth matrix as a backend reproduces the ground truth.
  const auto self = backend_ranks(ds, ScoreBackend::distances(m, "gt"), 4, 1);
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t k = 0; k < self.queries[i].candidates.size(); ++k)
      EXPECT_EQ(self.queries[i].candidates[k], gt.ranks.queries[i].candidates[k]);
}

TEST(RankTable, JsonRoundTripAndDeterminism) {
  std::mt19937_64 rng(43);
  const auto ds = testing::random_dataset(rng, 15, 2);
  const CostModel cm(testing::ten_concept_taxonomy());
  const auto m = pairwise_ged_matrix(ds, cm);
  const auto a = backend_ranks(ds, ScoreBackend::distances(m, "approx"), 4, 1);
  const auto b = backend_ranks(ds, ScoreBackend::distances(m, "approx"), 4, 3);
  const auto text = rank_table_to_json(a).dump(1);
  EXPECT_EQ(text, rank_table_to_json(b).dump(1));
  const auto back = rank_table_from_json(text, "r.json");
  EXPECT_EQ(back.backend_tag, "approx");
  EXPECT_EQ(rank_table_to_json(back).dump(1), text);
  EXPECT_THROW(rank_table_from_json("{\"ranks\":{}}", "r.json"), Error);
}

}  // namespace
}  // namespace cfged
