#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "dpstream/cellspace.hpp"
#include "dpstream/dptree.hpp"

namespace dpstream::oracle {

struct BatchParams {
  double d_c = 1.0;
  double xi = 0.0;
  double tau = 1.0;
  void validate() const;
};

struct BatchResult {
  std::vector<double> rho;
  std::vector<Dependency> dependency;  // among the non-outliers
  std::vector<Cluster> clusters;       // ids are point indices
  std::vector<CellId> outliers;
};

// Density peaks on raw points: rho counts points strictly closer than d_c
// (the point itself included), outliers have rho <= xi.
BatchResult batch_dp(std::span<const std::vector<double>> points, const BatchParams& params);

// Nearest strictly denser cell for every cell in `cells`, by exhaustive
// search. No filters.
std::map<CellId, Dependency> recompute_all(const CellStore& store, std::span<const CellId> cells, Timestamp t);

// Cells whose density at t reaches the activation threshold.
std::vector<CellId> threshold_partition(const CellStore& store, Timestamp t);

// Clusters of a forest cut at tau, same shape as DpTree::extract_clusters.
std::vector<Cluster> clusters_of(const std::map<CellId, Dependency>& forest, double tau);

struct LabeledAssignment {
  CellId cell = 0;
  Timestamp t = 0.0;
  std::string label;
};

// Freshness-weighted purity at t over the points whose cell belongs to a
// cluster of the snapshot. Throws UndefinedMetric when there is nothing to
// weigh.
double weighted_purity(const ClusterSnapshot& snapshot, std::span<const LabeledAssignment> points,
                       const DecayParams& decay, Timestamp t);

}  // namespace dpstream::oracle
