#include "dpstream/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "dpstream/error.hpp"

namespace dpstream {

std::size_t capacity_bound(const DecayParams& params) {
  const double bound = deletion_horizon(params).seconds * params.v + 1.0 / params.beta;
  return static_cast<std::size_t>(std::ceil(bound));
}

OutlierReservoir::OutlierReservoir(const DecayParams& params)
    : threshold_(active_threshold(params)), horizon_(deletion_horizon(params)) {}

void OutlierReservoir::put(CellId c, Timestamp t) { last_touch_.try_emplace(c, t); }

void OutlierReservoir::touch(CellId c, Timestamp t) {
  auto it = last_touch_.find(c);
  if (it == last_touch_.end()) throw StateError("cell " + std::to_string(c) + " is not in the reservoir");
  it->second = t;
}

Timestamp OutlierReservoir::last_touch(CellId c) const {
  auto it = last_touch_.find(c);
  if (it == last_touch_.end()) throw LookupError("cell " + std::to_string(c) + " is not in the reservoir");
  return it->second;
}

std::vector<CellId> OutlierReservoir::ids() const {
  std::vector<CellId> out;
  out.reserve(last_touch_.size());
  for (const auto& [id, t] : last_touch_) out.push_back(id);
  return out;
}

ActivationResult OutlierReservoir::try_activate(CellStore& store, DpTree& tree, CellId c, Timestamp t,
                                                bool after_absorb) {
  if (!contains(c)) throw StateError("cell " + std::to_string(c) + " is not in the reservoir");
  if (store.density_at(c, t) < threshold_) return {};
  last_touch_.erase(c);
  store.set_state(c, CellState::Active);
  return {Activation::Activated, tree.insert_active(store, c, t, after_absorb)};
}

std::vector<std::vector<CellId>> OutlierReservoir::deactivate_sweep(CellStore& store, DpTree& tree,
                                                                    Timestamp t) {
  const std::vector<CellId> below = tree.cells_below(store, threshold_, t);
  const std::unordered_set<CellId> below_set(below.begin(), below.end());
  std::vector<std::vector<CellId>> moved;
  for (CellId c : below) {
    if (!tree.contains(c)) continue;  // went with an earlier subtree
    const auto& parent = tree.node(c).parent;
    if (parent && below_set.count(*parent)) continue;  // removed with its ancestor
    std::vector<CellId> subtree = tree.remove_subtree(c);
    for (CellId id : subtree) {
      store.set_state(id, CellState::Inactive);
      last_touch_[id] = t;
    }
    moved.push_back(std::move(subtree));
  }
  return moved;
}

std::vector<CellId> OutlierReservoir::recycle(CellStore& store, Timestamp t) {
  std::vector<CellId> deleted;
  for (auto it = last_touch_.begin(); it != last_touch_.end();) {
    if (t - it->second > horizon_.seconds) {
      deleted.push_back(it->first);
      store.erase(it->first);
      it = last_touch_.erase(it);
    } else {
      ++it;
    }
  }
  return deleted;
}

}  // namespace dpstream
