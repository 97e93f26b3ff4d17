#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "dpstream/decay.hpp"
#include "dpstream/metric.hpp"
#include "dpstream/types.hpp"

namespace dpstream {

enum class CellState { Active, Inactive };

// Fixed-seed summary of the points that landed within radius r of the seed.
// The density is stored lazily as (value, time of last update).
struct ClusterCell {
  CellId id = 0;
  std::vector<double> seed;
  double rho_last = 0.0;
  Timestamp t_last = 0.0;
  CellState state = CellState::Inactive;
};

// What to do with a point older than the newest one seen.
enum class OrderPolicy { Reject, Clamp };

enum class SeedIndex { LinearScan, UniformGrid };

// How equidistant seeds are resolved.
enum class TieBreak { SmallestId, SeededRandom };

struct Nearest {
  CellId id = 0;
  double distance = 0.0;
};

struct AssignResult {
  enum class Kind { AbsorbedByExisting, NewCellCreated };
  Kind kind = Kind::NewCellCreated;
  CellId cell = 0;
  double distance = 0.0;
  Timestamp t = 0.0;  // effective time, after clamping
  double rho_before = 0.0;  // absorbing cell's density at t, before the +1
  double rho_after = 1.0;
};

struct CellStoreOptions {
  std::size_t dim = 2;
  double radius = 0.3;
  DecayParams decay;
  Metric metric;
  SeedIndex index = SeedIndex::LinearScan;
  OrderPolicy order = OrderPolicy::Reject;
  TieBreak ties = TieBreak::SmallestId;
  std::uint64_t seed = 0;
};

// Owns every live cell (active or not) and routes points to them.
class CellStore {
 public:
  explicit CellStore(CellStoreOptions options);

  // Exact nearest seed over all cells; ties go to the smallest id (or a
  // seeded random pick). Empty store yields nullopt.
  std::optional<Nearest> nearest_seed(std::span<const double> coords) const;

  // Absorb p into the nearest seed within r, or create a new inactive cell
  // with density 1 seeded at p. `new_id` is used for the created cell.
  AssignResult assign_point(const StreamPoint& p, CellId new_id);

  double density_at(CellId id, Timestamp t) const;

  const ClusterCell& cell(CellId id) const;
  bool contains(CellId id) const { return slot_.count(id) != 0; }
  void set_state(CellId id, CellState state);
  void erase(CellId id);
  // Re-inserts a cell verbatim (state restore).
  void restore(ClusterCell cell);

  std::size_t size() const { return cells_.size(); }
  std::size_t dim() const { return options_.dim; }
  double radius() const { return options_.radius; }
  const DecayParams& decay() const { return options_.decay; }
  const Metric& metric() const { return options_.metric; }
  const CellStoreOptions& options() const { return options_; }

  // Sorted ids of every cell.
  std::vector<CellId> ids() const;
  std::span<const ClusterCell> cells() const { return cells_; }

  Timestamp last_time() const { return last_time_; }
  void set_last_time(Timestamp t) { last_time_ = t; seen_any_ = true; }

  // Distance from the most recently assigned point to the seed of `id`.
  // Served from the assignment scan when it covered the cell.
  double distance_from_last_point(CellId id) const;
  double seed_distance(CellId a, CellId b) const;

  std::uint64_t distance_evaluations() const { return distance_evals_; }

 private:
  struct GridKeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& key) const;
  };

  std::vector<std::int64_t> grid_key(std::span<const double> coords) const;
  void grid_insert(const ClusterCell& cell);
  void grid_erase(const ClusterCell& cell);
  std::optional<Nearest> nearest_within_radius(std::span<const double> coords);
  std::optional<Nearest> scan_all(std::span<const double> coords, bool cache) const;
  bool prefer(const Nearest& candidate, const Nearest& best) const;
  std::size_t slot_of(CellId id) const;
  void check_dim(std::span<const double> coords) const;

  CellStoreOptions options_;
  std::vector<ClusterCell> cells_;
  std::unordered_map<CellId, std::size_t> slot_;
  std::unordered_map<std::vector<std::int64_t>, std::vector<CellId>, GridKeyHash> grid_;

  Timestamp last_time_ = 0.0;
  bool seen_any_ = false;

  // Per-slot distances from the last assigned point.
  mutable std::vector<double> last_distance_;
  mutable std::unordered_map<CellId, double> last_distance_sparse_;
  std::vector<double> last_point_;
  bool last_dense_valid_ = false;

  mutable std::uint64_t distance_evals_ = 0;
  mutable std::mt19937_64 rng_;
};

}  // namespace dpstream
