#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dpstream/dptree.hpp"
#include "dpstream/error.hpp"
#include "dpstream/oracle.hpp"

namespace dpstream {
namespace {

using oracle::BatchParams;

std::vector<std::vector<double>> two_blobs() {
  std::vector<std::vector<double>> pts;
  for (double cx : {0.0, 10.0}) {
    pts.push_back({cx, 0.0});
    pts.push_back({cx + 0.2, 0.0});
    pts.push_back({cx - 0.2, 0.0});
    pts.push_back({cx, 0.2});
    pts.push_back({cx, -0.2});
  }
  return pts;
}

TEST(BatchDp, TwoSeparatedBlobs) {
  const auto pts = two_blobs();
  const auto res = oracle::batch_dp(pts, BatchParams{0.5, 1.0, 5.0});
  ASSERT_EQ(res.clusters.size(), 2u);
  EXPECT_EQ(res.clusters[0].members, (std::vector<CellId>{0, 1, 2, 3, 4}));
  EXPECT_EQ(res.clusters[1].members, (std::vector<CellId>{5, 6, 7, 8, 9}));
  EXPECT_TRUE(res.outliers.empty());
  EXPECT_DOUBLE_EQ(res.rho[0], 5.0);  // centre sees all five, itself included
  EXPECT_DOUBLE_EQ(res.rho[1], 5.0);  // 0.4 to the opposite arm is inside 0.5
  EXPECT_EQ(res.clusters[0].id, 0u);  // all tied, lowest index is the peak
}

TEST(BatchDp, IdenticalPointsOneRoot) {
  const std::vector<std::vector<double>> pts(6, std::vector<double>{1.0, 1.0});
  const auto res = oracle::batch_dp(pts, BatchParams{0.1, 0.0, 1.0});
  ASSERT_EQ(res.clusters.size(), 1u);
  EXPECT_EQ(res.clusters[0].id, 0u);
  EXPECT_EQ(res.clusters[0].members.size(), 6u);
}

TEST(BatchDp, SinglePointIsOutlier) {
  const std::vector<std::vector<double>> pts{{0.0, 0.0}};
  const auto res = oracle::batch_dp(pts, BatchParams{1.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(res.rho[0], 1.0);
  EXPECT_EQ(res.outliers, (std::vector<CellId>{0}));
  EXPECT_TRUE(res.clusters.empty());
}

TEST(BatchDp, Errors) {
  const std::vector<std::vector<double>> none;
  EXPECT_THROW(oracle::batch_dp(none, BatchParams{}), InputError);
  const auto pts = two_blobs();
  EXPECT_THROW(oracle::batch_dp(pts, BatchParams{0.0, 1.0, 1.0}), ParameterError);
}

CellStoreOptions opts() {
  CellStoreOptions o;
  o.radius = 1e-6;
  return o;
}

void put_cell(CellStore& store, CellId id, double rho, std::vector<double> seed) {
  ClusterCell c;
  c.id = id;
  c.seed = std::move(seed);
  c.rho_last = rho;
  c.state = CellState::Active;
  store.restore(c);
}

TEST(RecomputeAll, ChainMatchesTree) {
  CellStore store(opts());
  put_cell(store, 1, 5.0, {0.0, 0.0});
  put_cell(store, 2, 3.0, {1.0, 0.0});
  put_cell(store, 3, 2.0, {3.0, 0.0});
  const std::vector<CellId> ids{1, 2, 3};
  const auto forest = oracle::recompute_all(store, ids, 0.0);
  EXPECT_EQ(forest.at(1), (Dependency{std::nullopt, kInfinity}));
  EXPECT_EQ(forest.at(2), (Dependency{1, 1.0}));
  EXPECT_EQ(forest.at(3), (Dependency{2, 2.0}));
}

TEST(RecomputeAll, EmptyAndSingle) {
  CellStore store(opts());
  EXPECT_TRUE(oracle::recompute_all(store, std::vector<CellId>{}, 0.0).empty());
  put_cell(store, 4, 1.0, {0.0, 0.0});
  const auto f = oracle::recompute_all(store, std::vector<CellId>{4}, 0.0);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_FALSE(f.at(4).parent.has_value());
}

TEST(RecomputeAll, RandomStatesMatchIncrementalAndIgnoreOrder) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> dens(1, 40);  // coarse densities force ties
  for (int trial = 0; trial < 20; ++trial) {
    CellStore store(opts());
    std::vector<CellId> ids;
    for (CellId id = 0; id < 200; ++id) {
      put_cell(store, id, dens(rng), {u(rng), u(rng)});
      ids.push_back(id);
    }
    DpTree tree;
    std::vector<CellId> half(ids.begin(), ids.begin() + 100);
    tree.build(store, half, 0.0);
    for (std::size_t i = 100; i < ids.size(); ++i) tree.insert_active(store, ids[i], 0.0, false);
    const auto forest = oracle::recompute_all(store, ids, 0.0);
    for (CellId c : ids) {
      EXPECT_EQ(tree.node(c).parent, forest.at(c).parent);
      EXPECT_EQ(tree.node(c).delta, forest.at(c).delta);
    }
    auto shuffled = ids;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(oracle::recompute_all(store, shuffled, 0.0), forest);
    EXPECT_EQ(oracle::clusters_of(forest, 1.0), tree.extract_clusters(1.0, 0.0).clusters);
  }
}

// One point per cell, all at one instant, d_c below every pairwise distance:
// every rho is 1 on both sides, so the dependency forests and clusters must
// coincide.
TEST(DegenerateRadius, TreeClustersEqualBatch) {
  std::mt19937_64 rng(40);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 60; ++i) pts.push_back({u(rng), u(rng)});
    double min_gap = kInfinity;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        min_gap = std::min(min_gap, euclidean_distance(pts[i], pts[j]));
    const double tau = 1.5;
    const auto batch = oracle::batch_dp(pts, BatchParams{min_gap / 2, 0.0, tau});

    CellStore store(opts());
    std::vector<CellId> ids;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      auto r = store.assign_point(StreamPoint{pts[i], 0.0, {}}, i);
      ASSERT_EQ(r.kind, AssignResult::Kind::NewCellCreated);
      store.set_state(i, CellState::Active);
      ids.push_back(i);
    }
    DpTree tree;
    tree.build(store, ids, 0.0);
    EXPECT_EQ(tree.extract_clusters(tau, 0.0).clusters, batch.clusters);
  }
}

TEST(ThresholdPartition, InclusiveThreshold) {
  CellStoreOptions o;
  CellStore store(o);
  const double th = active_threshold(o.decay);
  put_cell(store, 1, th, {0.0, 0.0});
  put_cell(store, 2, th * 0.999, {1.0, 0.0});
  put_cell(store, 3, th * 2, {2.0, 0.0});
  EXPECT_EQ(oracle::threshold_partition(store, 0.0), (std::vector<CellId>{1, 3}));
}

ClusterSnapshot one_cluster_each(std::vector<Cluster> clusters) {
  ClusterSnapshot s;
  s.clusters = std::move(clusters);
  return s;
}

TEST(WeightedPurity, PerfectSeparationIsOne) {
  const auto s = one_cluster_each({{1, {1, 2}}, {3, {3}}});
  std::vector<oracle::LabeledAssignment> pts{
      {1, 0.0, "a"}, {2, 0.5, "a"}, {1, 0.7, "a"}, {3, 0.1, "b"}, {3, 0.9, "b"}};
  EXPECT_EQ(oracle::weighted_purity(s, pts, DecayParams{}, 1.0), 1.0);
}

TEST(WeightedPurity, EvenSplitIsHalf) {
  const auto s = one_cluster_each({{1, {1}}});
  std::vector<oracle::LabeledAssignment> pts{{1, 1.0, "a"}, {1, 1.0, "b"}};
  EXPECT_DOUBLE_EQ(oracle::weighted_purity(s, pts, DecayParams{}, 1.0), 0.5);
}

TEST(WeightedPurity, StaleWrongLabelWeighsLess) {
  const DecayParams p{0.5, 1.0, 1.0, 0.9};
  const auto s = one_cluster_each({{1, {1}}});
  // fresh "a" at t=2 has weight 1, stale "b" at t=0 has weight 0.25
  std::vector<oracle::LabeledAssignment> pts{{1, 0.0, "b"}, {1, 2.0, "a"}};
  EXPECT_DOUBLE_EQ(oracle::weighted_purity(s, pts, p, 2.0), 1.0 / 1.25);
}

TEST(WeightedPurity, UnclusteredPointsIgnored) {
  const auto s = one_cluster_each({{1, {1}}});
  std::vector<oracle::LabeledAssignment> pts{{1, 0.0, "a"}, {9, 0.0, "b"}};
  EXPECT_EQ(oracle::weighted_purity(s, pts, DecayParams{}, 0.0), 1.0);
}

TEST(WeightedPurity, UndefinedWithoutPoints) {
  const auto s = one_cluster_each({{1, {1}}});
  EXPECT_THROW(oracle::weighted_purity(s, {}, DecayParams{}, 0.0), UndefinedMetric);
  std::vector<oracle::LabeledAssignment> stray{{9, 0.0, "a"}};
  EXPECT_THROW(oracle::weighted_purity(s, stray, DecayParams{}, 0.0), UndefinedMetric);
}

}  // namespace
}  // namespace dpstream
