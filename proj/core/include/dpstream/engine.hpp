#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpstream/cellspace.hpp"
#include "dpstream/config.hpp"
#include "dpstream/dptree.hpp"
#include "dpstream/evolution.hpp"
#include "dpstream/reservoir.hpp"
#include "dpstream/tauctl.hpp"

namespace dpstream {

// How the densest cell enters the separation objective. Its dependent
// distance is infinite, so either it is left out, or it takes the largest
// distance from it to any other active cell.
enum class RootDelta { Exclude, MaxDistance };

struct EngineCounters {
  std::uint64_t points = 0;
  std::uint64_t cells_created = 0;
  std::uint64_t activations = 0;
  std::uint64_t deactivations = 0;
  std::uint64_t recycled = 0;
  std::uint64_t sweeps = 0;
  std::uint64_t tau_retained = 0;  // re-selection had no valid candidate
  std::uint64_t assign_distance_evaluations = 0;
  TreeCounters tree;

  std::uint64_t distance_evaluations() const {
    return assign_distance_evaluations + tree.distance_evaluations;
  }
};

// Everything needed to resume an engine.
struct EngineImage {
  EngineConfig config;
  std::size_t dim = 0;
  RootDelta root_delta = RootDelta::MaxDistance;
  std::vector<ClusterCell> cells;
  struct TreeNode {
    CellId id = 0;
    std::optional<CellId> parent;
    double delta = kInfinity;
  };
  std::vector<TreeNode> tree;
  std::vector<std::pair<CellId, Timestamp>> reservoir;
  TauState tau;
  std::uint64_t processed = 0;
  Timestamp time = 0.0;
  bool seen_any = false;
  ClusterSnapshot last_snapshot;
  std::uint64_t provenance = 0;
};

class Engine {
 public:
  Engine(EngineConfig config, std::size_t dim, RootDelta root_delta = RootDelta::MaxDistance,
         Metric metric = Metric::euclidean());

  // Builds cells from the buffer, the tree from those at or above the
  // activation threshold, and learns alpha from tau0 unless overridden.
  // Returns the decision graph. Throws InitializationError when the buffer
  // yields fewer than init_cell_count cells or fewer than two active ones.
  std::vector<DecisionGraphPoint> initialize(std::span<const StreamPoint> buffer);
  bool initialized() const { return initialized_; }

  // Returns the events emitted by this call (only at sweep boundaries).
  std::vector<EvolutionEvent> process_point(const StreamPoint& p);
  // Forces a sweep at the current time and returns the clustering.
  ClusterSnapshot snapshot();

  const AssignResult& last_assignment() const { return last_assignment_; }
  std::vector<DecisionGraphPoint> decision_graph() const;
  // The multiset the separation objective is evaluated on.
  std::vector<double> objective_deltas() const;

  const EngineConfig& config() const { return config_; }
  const CellStore& store() const { return store_; }
  const DpTree& tree() const { return tree_; }
  const OutlierReservoir& reservoir() const { return reservoir_; }
  const TauState& tau() const { return tau_; }
  const EventLog& events() const { return log_; }
  const ClusterSnapshot& last_snapshot() const { return last_snapshot_; }
  EngineCounters counters() const;
  Timestamp time() const { return store_.last_time(); }
  std::uint64_t processed() const { return processed_; }
  std::uint64_t provenance() const { return provenance_; }

  EngineImage image() const;
  static Engine from_image(const EngineImage& image, Metric metric = Metric::euclidean());

 private:
  std::vector<EvolutionEvent> sweep(Timestamp t);
  ClusterSnapshot current_snapshot(Timestamp t) const;
  void reselect_tau();
  void ingest(const StreamPoint& p);

  EngineConfig config_;
  RootDelta root_delta_;
  CellStore store_;
  DpTree tree_;
  OutlierReservoir reservoir_;
  TauState tau_;
  EventLog log_;
  ClusterSnapshot last_snapshot_;
  AssignResult last_assignment_;
  std::uint64_t processed_ = 0;
  std::uint64_t provenance_ = 0;
  bool initialized_ = false;

  std::uint64_t cells_created_ = 0;
  std::uint64_t activations_ = 0;
  std::uint64_t deactivations_ = 0;
  std::uint64_t recycled_ = 0;
  std::uint64_t sweeps_ = 0;
  std::uint64_t tau_retained_ = 0;
};

}  // namespace dpstream
