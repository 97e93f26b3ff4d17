#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "dpstream/cellspace.hpp"
#include "dpstream/decay.hpp"
#include "dpstream/dptree.hpp"

namespace dpstream {

enum class Activation { Activated, StillInactive };

struct ActivationResult {
  Activation outcome = Activation::StillInactive;
  std::vector<Relink> relinks;
};

// ceil(deletion_horizon * v + 1 / beta): most inactive cells the reservoir
// can hold at a fixed arrival rate.
std::size_t capacity_bound(const DecayParams& params);

// Holding area for inactive cells. Owns the activation/deactivation
// transitions between itself and the tree, and recycles outdated cells.
class OutlierReservoir {
 public:
  explicit OutlierReservoir(const DecayParams& params);

  // Idempotent.
  void put(CellId c, Timestamp t);
  // Records an absorption by a member.
  void touch(CellId c, Timestamp t);
  bool contains(CellId c) const { return last_touch_.count(c) != 0; }
  std::size_t size() const { return last_touch_.size(); }
  Timestamp last_touch(CellId c) const;
  std::vector<CellId> ids() const;

  double threshold() const { return threshold_; }
  const DeletionHorizon& horizon() const { return horizon_; }

  // Moves c into the tree when its density at t reaches the threshold
  // (inclusive).
  ActivationResult try_activate(CellStore& store, DpTree& tree, CellId c, Timestamp t,
                                bool after_absorb = true);

  // Moves every active cell below the threshold, with its descendants, into
  // the reservoir. Returns the moved subtrees.
  std::vector<std::vector<CellId>> deactivate_sweep(CellStore& store, DpTree& tree, Timestamp t);

  // Deletes every member untouched for longer than the deletion horizon.
  std::vector<CellId> recycle(CellStore& store, Timestamp t);

 private:
  double threshold_;
  DeletionHorizon horizon_;
  std::map<CellId, Timestamp> last_touch_;
};

}  // namespace dpstream
