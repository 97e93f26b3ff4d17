#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "dpstream/cellspace.hpp"
#include "dpstream/dptree.hpp"
#include "dpstream/error.hpp"

namespace dpstream {
namespace {

CellStoreOptions opts() {
  CellStoreOptions o;
  o.dim = 2;
  o.radius = 0.3;
  o.decay = DecayParams{0.998, 1.0, 1000.0, 0.0021};
  return o;
}

void put_cell(CellStore& store, CellId id, double rho, double x, double y, bool active = true) {
  ClusterCell c;
  c.id = id;
  c.seed = {x, y};
  c.rho_last = rho;
  c.t_last = 0.0;
  c.state = active ? CellState::Active : CellState::Inactive;
  store.restore(c);
}

std::vector<CellId> active_ids(const CellStore& store) {
  std::vector<CellId> out;
  for (const auto& c : store.cells())
    if (c.state == CellState::Active) out.push_back(c.id);
  std::sort(out.begin(), out.end());
  return out;
}

// Straight from the definition: nearest active cell ranking above c.
Dependency brute_dependency(const CellStore& store, CellId c, Timestamp t) {
  Dependency best;
  const double rc = store.density_at(c, t);
  for (CellId e : active_ids(store)) {
    if (e == c || !ranks_above(store.density_at(e, t), e, rc, c)) continue;
    const double d = store.metric()(store.cell(c).seed, store.cell(e).seed);
    if (!best.parent || d < best.delta || (d == best.delta && e < *best.parent)) {
      best.parent = e;
      best.delta = d;
    }
  }
  return best;
}

void expect_matches_brute_force(const CellStore& store, const DpTree& tree, Timestamp t) {
  ASSERT_EQ(tree.ids(), active_ids(store));
  for (CellId c : tree.ids()) {
    const Dependency want = brute_dependency(store, c, t);
    const auto& n = tree.node(c);
    EXPECT_EQ(n.parent, want.parent) << "cell " << c;
    EXPECT_EQ(n.delta, want.delta) << "cell " << c;
  }
}

struct Chain {
  CellStore store{opts()};
  DpTree tree;
  explicit Chain(double rho_b = 3.0) {
    put_cell(store, 1, 5.0, 0.0, 0.0);  // A
    put_cell(store, 2, rho_b, 1.0, 0.0);  // B
    put_cell(store, 3, 2.0, 3.0, 0.0);  // C
    std::vector<CellId> ids{1, 2, 3};
    tree.build(store, ids, 0.0);
  }
};

TEST(ComputeDependency, ThreeCellChain) {
  Chain ch;
  EXPECT_EQ(ch.tree.compute_dependency(ch.store, 2, 0.0), (Dependency{1, 1.0}));
  EXPECT_EQ(ch.tree.compute_dependency(ch.store, 3, 0.0), (Dependency{2, 2.0}));
  EXPECT_EQ(ch.tree.compute_dependency(ch.store, 1, 0.0), (Dependency{std::nullopt, kInfinity}));
  expect_matches_brute_force(ch.store, ch.tree, 0.0);
}

TEST(ComputeDependency, SingleCellIsRoot) {
  CellStore store(opts());
  put_cell(store, 4, 2.0, 0.0, 0.0);
  DpTree tree;
  std::vector<CellId> ids{4};
  tree.build(store, ids, 0.0);
  EXPECT_EQ(tree.compute_dependency(store, 4, 0.0), (Dependency{std::nullopt, kInfinity}));
}

TEST(ComputeDependency, EqualDensityLowerIdIsDenser) {
  CellStore store(opts());
  put_cell(store, 8, 4.0, 0.0, 0.0);
  put_cell(store, 5, 4.0, 2.0, 0.0);
  DpTree tree;
  std::vector<CellId> ids{5, 8};
  tree.build(store, ids, 0.0);
  EXPECT_FALSE(tree.node(5).parent.has_value());
  EXPECT_EQ(tree.node(8).parent, std::optional<CellId>(5));
  EXPECT_DOUBLE_EQ(tree.node(8).delta, 2.0);
}

TEST(ComputeDependency, InactiveCellThrows) {
  Chain ch;
  put_cell(ch.store, 9, 1.0, 9.0, 9.0, false);
  EXPECT_THROW(ch.tree.compute_dependency(ch.store, 9, 0.0), StateError);
}

TEST(DensityFilter, Examples) {
  EXPECT_EQ(density_filter(5.0, 3.0, 4.99, 3.994, 1, 2), FilterVerdict::SkipUpdate);
  EXPECT_EQ(density_filter(2.0, 3.0, 2.0, 4.0, 1, 2), FilterVerdict::SkipUpdate);
  EXPECT_EQ(density_filter(3.5, 3.0, 3.493, 3.994, 1, 2), FilterVerdict::MustCheck);
}

TEST(DensityFilter, TieOrderCounts) {
  // equal after: the lower id still ranks above, so nothing crossed
  EXPECT_EQ(density_filter(3.5, 3.0, 4.0, 4.0, 1, 2), FilterVerdict::SkipUpdate);
  EXPECT_EQ(density_filter(3.5, 3.0, 4.0, 4.0, 2, 1), FilterVerdict::MustCheck);
}

TEST(TriangleFilter, Examples) {
  EXPECT_EQ(triangle_filter(10.0, 2.0, 5.0), FilterVerdict::SkipUpdate);
  EXPECT_EQ(triangle_filter(3.0, 2.0, 5.0), FilterVerdict::MustCheck);
  EXPECT_EQ(triangle_filter(7.0, 2.0, 5.0), FilterVerdict::MustCheck);  // equality is not enough
}

// Feed a point into the store and keep the tree in step, activating any cell
// whose density reaches `activate_at`.
std::vector<Relink> feed(CellStore& store, DpTree& tree, const StreamPoint& p, CellId new_id,
                         double activate_at) {
  const auto r = store.assign_point(p, new_id);
  if (store.cell(r.cell).state == CellState::Active)
    return tree.on_density_increase(store, r.cell, r.rho_before, r.t);
  if (r.rho_after >= activate_at) {
    store.set_state(r.cell, CellState::Active);
    return tree.insert_active(store, r.cell, r.t, true);
  }
  return {};
}

TEST(OnDensityIncrease, ChainCRisesAboveB) {
  Chain ch;
  Timestamp t = 0.0;
  CellId next = 100;
  while (ch.store.density_at(3, t) <= ch.store.density_at(2, t)) {
    t += 0.001;
    feed(ch.store, ch.tree, StreamPoint{{3.0, 0.0}, t, {}}, next++, 1e9);
  }
  EXPECT_LT(ch.store.density_at(3, t), ch.store.density_at(1, t));
  EXPECT_EQ(ch.tree.node(3).parent, std::optional<CellId>(1));
  EXPECT_DOUBLE_EQ(ch.tree.node(3).delta, 3.0);
  // |s_B, s_C| = 2 is not below delta_B = 1
  EXPECT_EQ(ch.tree.node(2).parent, std::optional<CellId>(1));
  expect_matches_brute_force(ch.store, ch.tree, t);
}

TEST(OnDensityIncrease, LeastDenseStaysPut) {
  Chain ch(4.0);  // B with room above C after one more point
  const auto before = ch.tree.node(3);
  auto relinks = feed(ch.store, ch.tree, StreamPoint{{3.0, 0.1}, 0.001, {}}, 100, 1e9);
  EXPECT_TRUE(relinks.empty());
  EXPECT_EQ(ch.tree.node(3).parent, before.parent);
  EXPECT_EQ(ch.tree.node(3).delta, before.delta);
  EXPECT_EQ(ch.tree.node(2).delta, 1.0);
}

TEST(OnDensityIncrease, InactiveCellThrows) {
  Chain ch;
  EXPECT_THROW(ch.tree.on_density_increase(ch.store, 42, 1.0, 0.0), StateError);
}

TEST(InsertActive, NewDensestNearOldRoot) {
  Chain ch;
  put_cell(ch.store, 10, 6.0, 0.1, 0.0, false);
  ch.store.set_state(10, CellState::Active);
  ch.tree.insert_active(ch.store, 10, 0.0, false);
  EXPECT_FALSE(ch.tree.node(10).parent.has_value());
  EXPECT_EQ(ch.tree.node(1).parent, std::optional<CellId>(10));
  EXPECT_NEAR(ch.tree.node(1).delta, 0.1, 1e-12);
  expect_matches_brute_force(ch.store, ch.tree, 0.0);
}

TEST(InsertActive, LeastDenseFarCell) {
  Chain ch;
  put_cell(ch.store, 10, 1.0, 50.0, 0.0, false);
  ch.store.set_state(10, CellState::Active);
  auto relinks = ch.tree.insert_active(ch.store, 10, 0.0, false);
  for (const auto& r : relinks) EXPECT_EQ(r.cell, 10u);
  EXPECT_EQ(ch.tree.node(10).parent, std::optional<CellId>(3));
  EXPECT_DOUBLE_EQ(ch.tree.node(2).delta, 1.0);
  EXPECT_DOUBLE_EQ(ch.tree.node(3).delta, 2.0);
}

TEST(InsertActive, DoubleInsertThrows) {
  Chain ch;
  EXPECT_THROW(ch.tree.insert_active(ch.store, 2, 0.0, false), StateError);
}

TEST(RemoveSubtree, Leaf) {
  Chain ch;
  EXPECT_EQ(ch.tree.remove_subtree(3), (std::vector<CellId>{3}));
  EXPECT_EQ(ch.tree.ids(), (std::vector<CellId>{1, 2}));
}

TEST(RemoveSubtree, RootTakesEverything) {
  Chain ch;
  EXPECT_EQ(ch.tree.remove_subtree(1), (std::vector<CellId>{1, 2, 3}));
  EXPECT_EQ(ch.tree.size(), 0u);
}

TEST(RemoveSubtree, NotActiveThrows) {
  Chain ch;
  EXPECT_THROW(ch.tree.remove_subtree(77), StateError);
}

TEST(ExtractClusters, CutLongLinks) {
  CellStore store(opts());
  put_cell(store, 1, 5.0, 0.0, 0.0);  // A
  put_cell(store, 2, 3.0, 0.5, 0.0);  // B, delta 0.5
  put_cell(store, 3, 2.0, 0.0, 3.0);  // C, delta 3
  DpTree tree;
  std::vector<CellId> ids{1, 2, 3};
  tree.build(store, ids, 0.0);
  ASSERT_EQ(tree.node(3).parent, std::optional<CellId>(1));
  auto snap = tree.extract_clusters(1.0, 0.0);
  ASSERT_EQ(snap.clusters.size(), 2u);
  EXPECT_EQ(snap.clusters[0], (Cluster{1, {1, 2}}));
  EXPECT_EQ(snap.clusters[1], (Cluster{3, {3}}));
  auto all = tree.extract_clusters(kInfinity, 0.0);
  ASSERT_EQ(all.clusters.size(), 1u);
  EXPECT_EQ(all.clusters[0].members, (std::vector<CellId>{1, 2, 3}));
  auto none = tree.extract_clusters(0.25, 0.0);
  EXPECT_EQ(none.clusters.size(), 3u);
  EXPECT_THROW(tree.extract_clusters(0.0, 0.0), ParameterError);
  EXPECT_THROW(tree.extract_clusters(-1.0, 0.0), ParameterError);
}

// Random absorptions with the tree kept in step by each filter mode; every
// mode must reproduce the definition after every step.
TEST(DpTreeProperty, FiltersMatchBruteForce) {
  for (FilterMode mode : {FilterMode::Both, FilterMode::DensityOnly, FilterMode::Off}) {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, 1.2);
    CellStore store(opts());
    DpTree tree(mode);
    Timestamp t = 0.0;
    for (int k = 0; k < 1500; ++k) {
      t += 0.001;
      feed(store, tree, StreamPoint{{g(rng), g(rng)}, t, {}}, static_cast<CellId>(k), 3.0);
      if (k % 50 == 0) expect_matches_brute_force(store, tree, t);
    }
    expect_matches_brute_force(store, tree, t);
  }
}

TEST(DpTreeProperty, FilterModesAgreeAndSaveWork) {
  std::vector<std::vector<std::pair<std::optional<CellId>, double>>> results;
  std::vector<std::uint64_t> evals;
  for (FilterMode mode : {FilterMode::Both, FilterMode::Off}) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.5);
    CellStore store(opts());
    DpTree tree(mode);
    Timestamp t = 0.0;
    for (int k = 0; k < 3000; ++k) {
      t += 0.001;
      feed(store, tree, StreamPoint{{g(rng), g(rng)}, t, {}}, static_cast<CellId>(k), 2.0);
    }
    std::vector<std::pair<std::optional<CellId>, double>> forest;
    for (CellId c : tree.ids()) forest.emplace_back(tree.node(c).parent, tree.node(c).delta);
    results.push_back(forest);
    evals.push_back(tree.counters().distance_evaluations + store.distance_evaluations());
  }
  EXPECT_EQ(results[0], results[1]);
  EXPECT_LT(evals[0], evals[1]);
}

TEST(DpTreeProperty, RemoveSubtreeLeavesConsistentForest) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  CellStore store(opts());
  DpTree tree;
  Timestamp t = 0.0;
  for (int k = 0; k < 1200; ++k) {
    t += 0.001;
    feed(store, tree, StreamPoint{{g(rng), g(rng)}, t, {}}, static_cast<CellId>(k), 2.0);
  }
  auto ids = tree.ids();
  ASSERT_GT(ids.size(), 4u);
  std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
  for (int round = 0; round < 3 && tree.size() > 1; ++round) {
    ids = tree.ids();
    const CellId victim = ids[pick(rng) % ids.size()];
    for (CellId gone : tree.remove_subtree(victim)) store.set_state(gone, CellState::Inactive);
    expect_matches_brute_force(store, tree, t);
  }
}

TEST(DpTreeProperty, NearestDenserAndMonotonicity) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  CellStore store(opts());
  DpTree tree;
  Timestamp t = 0.0;
  for (int k = 0; k < 2000; ++k) {
    t += 0.001;
    const StreamPoint p{{g(rng), g(rng)}, t, {}};
    const auto nearest = store.nearest_seed(p.coords);
    std::optional<double> delta_before;
    if (nearest && nearest->distance <= 0.3 && tree.contains(nearest->id))
      delta_before = tree.node(nearest->id).delta;
    const auto relinks = feed(store, tree, p, static_cast<CellId>(k), 2.0);
    if (delta_before) {
      EXPECT_GE(tree.node(nearest->id).delta, *delta_before);
      for (const auto& r : relinks)
        if (r.cell != nearest->id) EXPECT_LT(r.new_delta, r.old_delta);
    }
  }
  for (CellId c : tree.ids()) {
    const auto& n = tree.node(c);
    if (!n.parent) continue;
    for (CellId e : tree.ids()) {
      if (e == c || !ranks_above(store.density_at(e, t), e, store.density_at(c, t), c)) continue;
      EXPECT_GE(store.metric()(store.cell(c).seed, store.cell(e).seed), n.delta);
    }
  }
}

}  // namespace
}  // namespace dpstream
