#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "dpstream/cellspace.hpp"
#include "dpstream/types.hpp"

namespace dpstream {

enum class FilterMode { Both, DensityOnly, Off };

enum class FilterVerdict { SkipUpdate, MustCheck };

struct Dependency {
  std::optional<CellId> parent;
  double delta = kInfinity;
  bool operator==(const Dependency&) const = default;
};

// One dependency change made by a tree update.
struct Relink {
  CellId cell = 0;
  std::optional<CellId> old_parent;
  std::optional<CellId> new_parent;
  double old_delta = kInfinity;
  double new_delta = kInfinity;
};

struct Cluster {
  CellId id = 0;  // root cell, i.e. the cluster centre
  std::vector<CellId> members;  // sorted, includes the root
  bool operator==(const Cluster&) const = default;
};

struct ClusterSnapshot {
  Timestamp time = 0.0;
  double tau = 0.0;
  std::vector<Cluster> clusters;  // sorted by id
  std::vector<CellId> outlier_cells;  // sorted
  std::uint64_t provenance = 0;

  // Provenance is deliberately not compared: equal content is equal.
  bool operator==(const ClusterSnapshot& o) const {
    return time == o.time && tau == o.tau && clusters == o.clusters && outlier_cells == o.outlier_cells;
  }
};

struct TreeCounters {
  std::uint64_t distance_evaluations = 0;
  std::uint64_t density_filter_skips = 0;
  std::uint64_t triangle_filter_skips = 0;
  std::uint64_t candidates_checked = 0;
  std::uint64_t relinks = 0;
};

// Strict density order with ties going to the smaller id. A cell "denser"
// than another in this order is what every dependency computation means.
inline bool ranks_above(double rho_a, CellId a, double rho_b, CellId b) {
  if (rho_a != rho_b) return rho_a > rho_b;
  return a < b;
}

// Density-filter rule for a cell c when c' has just absorbed a point.
// Skip unless c ranked above c' before the absorption and below it after.
FilterVerdict density_filter(double rho_c_before, double rho_cprime_before, double rho_c_after,
                             double rho_cprime_after, CellId c, CellId cprime);

// Triangle-inequality rule: c cannot adopt c' when the two seeds' distances
// to the absorbed point differ by more than c's dependent distance.
FilterVerdict triangle_filter(double dist_point_c, double dist_point_cprime, double delta_c);

// Dependency forest over the active cells: each cell links to its nearest
// strictly denser active cell. The densest cell is the single root.
class DpTree {
 public:
  struct Node {
    std::optional<CellId> parent;
    double delta = kInfinity;
    std::vector<CellId> children;
  };

  explicit DpTree(FilterMode filters = FilterMode::Both) : filters_(filters) {}

  bool contains(CellId id) const { return nodes_.count(id) != 0; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(CellId id) const;
  std::vector<CellId> ids() const;  // sorted
  FilterMode filters() const { return filters_; }
  void set_filters(FilterMode mode) { filters_ = mode; }

  // Nearest cell ranking above c among the active cells. Read-only.
  Dependency compute_dependency(const CellStore& store, CellId c, Timestamp t) const;

  // c' (already in the tree) has just absorbed the point last assigned in
  // `store`; rho_before is its density at t before the +1.
  std::vector<Relink> on_density_increase(const CellStore& store, CellId cprime, double rho_before,
                                          Timestamp t);

  // Adds a newly activated cell. When `after_absorb` is set the cell has just
  // absorbed the store's last point and the triangle filter may use it.
  std::vector<Relink> insert_active(const CellStore& store, CellId c, Timestamp t,
                                    bool after_absorb = true);

  // Detaches c and all of its descendants; returns them sorted.
  std::vector<CellId> remove_subtree(CellId c);

  // Cells whose density at t is below `threshold`. This set is closed under
  // descendants.
  std::vector<CellId> cells_below(const CellStore& store, double threshold, Timestamp t) const;

  // Cuts every link longer than tau; each component is one cluster.
  ClusterSnapshot extract_clusters(double tau, Timestamp t) const;

  // Batch construction over `cells`, replacing the current content.
  void build(const CellStore& store, std::span<const CellId> cells, Timestamp t);

  // Inserts a node verbatim (state restore). Call finish_restore afterwards.
  void restore_node(CellId id, std::optional<CellId> parent, double delta);
  void finish_restore(const CellStore& store);

  const TreeCounters& counters() const { return counters_; }

 private:
  struct Key {
    double log_density;  // time-normalised: ln(rho_last) + kappa * t_last
    CellId id;
    bool operator<(const Key& o) const {
      if (log_density != o.log_density) return log_density > o.log_density;
      return id < o.id;
    }
  };

  double kappa(const CellStore& store) const;
  Key key_of(const CellStore& store, CellId id) const;
  void index_insert(const CellStore& store, CellId id);
  void index_erase(CellId id);
  void set_dependency(CellId id, const Dependency& dep);
  double seed_distance(const CellStore& store, CellId a, CellId b) const;
  // Candidates (superset) whose density at t lies within [lo, hi].
  std::vector<CellId> band(const CellStore& store, double lo, double hi, Timestamp t) const;
  bool adopts(const Node& n, CellId candidate, double distance) const;

  FilterMode filters_;
  std::unordered_map<CellId, Node> nodes_;
  std::set<Key> index_;
  std::unordered_map<CellId, Key> keys_;
  mutable TreeCounters counters_;
};

}  // namespace dpstream
