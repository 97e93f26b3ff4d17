#include "dpstream/cellspace.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dpstream/error.hpp"

namespace dpstream {

namespace {
constexpr std::size_t kMaxGridDim = 4;
}

CellStore::CellStore(CellStoreOptions options) : options_(std::move(options)), rng_(options_.seed) {
  if (options_.dim == 0) throw ParameterError("dimension must be positive");
  if (!(options_.radius > 0.0)) throw ParameterError("cell radius must be positive");
  if (options_.index == SeedIndex::UniformGrid && options_.dim > kMaxGridDim) {
    throw ParameterError("grid index supports at most 4 dimensions");
  }
  options_.decay.validate();
}

void CellStore::check_dim(std::span<const double> coords) const {
  if (coords.size() != options_.dim) {
    throw InputError("point has dimension " + std::to_string(coords.size()) + ", stream has " +
                     std::to_string(options_.dim));
  }
}

std::size_t CellStore::slot_of(CellId id) const {
  auto it = slot_.find(id);
  if (it == slot_.end()) throw LookupError("unknown cell id " + std::to_string(id));
  return it->second;
}

const ClusterCell& CellStore::cell(CellId id) const { return cells_[slot_of(id)]; }

void CellStore::set_state(CellId id, CellState state) { cells_[slot_of(id)].state = state; }

bool CellStore::prefer(const Nearest& candidate, const Nearest& best) const {
  if (candidate.distance != best.distance) return candidate.distance < best.distance;
  return candidate.id < best.id;
}

std::optional<Nearest> CellStore::scan_all(std::span<const double> coords, bool cache) const {
  if (cache) last_distance_.assign(cells_.size(), 0.0);
  std::optional<Nearest> best;
  std::size_t ties = 0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const double d = options_.metric(coords, cells_[i].seed);
    ++distance_evals_;
    if (cache) last_distance_[i] = d;
    const Nearest candidate{cells_[i].id, d};
    if (!best || d < best->distance) {
      best = candidate;
      ties = 1;
    } else if (d == best->distance) {
      if (options_.ties == TieBreak::SeededRandom) {
        ++ties;
        if (std::uniform_int_distribution<std::size_t>(0, ties - 1)(rng_) == 0) best = candidate;
      } else if (candidate.id < best->id) {
        best = candidate;
      }
    }
  }
  return best;
}

std::optional<Nearest> CellStore::nearest_seed(std::span<const double> coords) const {
  check_dim(coords);
  return scan_all(coords, false);
}

std::size_t CellStore::GridKeyHash::operator()(const std::vector<std::int64_t>& key) const {
  std::size_t h = 1469598103934665603ULL;
  for (auto k : key) {
    h ^= static_cast<std::size_t>(k) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::vector<std::int64_t> CellStore::grid_key(std::span<const double> coords) const {
  std::vector<std::int64_t> key(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    key[i] = static_cast<std::int64_t>(std::floor(coords[i] / options_.radius));
  }
  return key;
}

void CellStore::grid_insert(const ClusterCell& cell) { grid_[grid_key(cell.seed)].push_back(cell.id); }

void CellStore::grid_erase(const ClusterCell& cell) {
  auto it = grid_.find(grid_key(cell.seed));
  if (it == grid_.end()) return;
  auto& bucket = it->second;
  bucket.erase(std::remove(bucket.begin(), bucket.end(), cell.id), bucket.end());
  if (bucket.empty()) grid_.erase(it);
}

// Any seed within r of the point lies in one of the 3^d buckets around it.
std::optional<Nearest> CellStore::nearest_within_radius(std::span<const double> coords) {
  last_distance_sparse_.clear();
  const auto centre = grid_key(coords);
  const std::size_t d = centre.size();
  std::vector<std::int64_t> key(d);
  std::size_t combos = 1;
  for (std::size_t i = 0; i < d; ++i) combos *= 3;

  std::optional<Nearest> best;
  std::size_t ties = 0;
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t rest = c;
    for (std::size_t i = 0; i < d; ++i) {
      key[i] = centre[i] + static_cast<std::int64_t>(rest % 3) - 1;
      rest /= 3;
    }
    auto it = grid_.find(key);
    if (it == grid_.end()) continue;
    for (CellId id : it->second) {
      const double dist = options_.metric(coords, cells_[slot_.at(id)].seed);
      ++distance_evals_;
      last_distance_sparse_[id] = dist;
      if (dist > options_.radius) continue;
      const Nearest candidate{id, dist};
      if (!best || dist < best->distance) {
        best = candidate;
        ties = 1;
      } else if (dist == best->distance) {
        if (options_.ties == TieBreak::SeededRandom) {
          ++ties;
          if (std::uniform_int_distribution<std::size_t>(0, ties - 1)(rng_) == 0) best = candidate;
        } else if (id < best->id) {
          best = candidate;
        }
      }
    }
  }
  return best;
}

AssignResult CellStore::assign_point(const StreamPoint& p, CellId new_id) {
  check_dim(p.coords);
  Timestamp t = p.t;
  if (seen_any_ && t < last_time_) {
    if (options_.order == OrderPolicy::Reject) {
      throw OrderingError("timestamp " + std::to_string(t) + " precedes " + std::to_string(last_time_));
    }
    t = last_time_;
  }
  last_time_ = t;
  seen_any_ = true;
  last_point_ = p.coords;

  std::optional<Nearest> hit;
  if (options_.index == SeedIndex::LinearScan) {
    hit = scan_all(p.coords, true);
    last_dense_valid_ = true;
    last_distance_sparse_.clear();
    if (hit && hit->distance > options_.radius) hit.reset();
  } else {
    hit = nearest_within_radius(p.coords);
    last_dense_valid_ = false;
  }

  if (hit) {
    auto& c = cells_[slot_.at(hit->id)];
    const double before = decay_density(c.rho_last, c.t_last, t, options_.decay);
    c.rho_last = before + 1.0;
    c.t_last = t;
    return {AssignResult::Kind::AbsorbedByExisting, hit->id, hit->distance, t, before, c.rho_last};
  }

  if (slot_.count(new_id)) throw StateError("cell id " + std::to_string(new_id) + " already in use");
  ClusterCell c;
  c.id = new_id;
  c.seed = p.coords;
  c.rho_last = 1.0;
  c.t_last = t;
  c.state = CellState::Inactive;
  slot_[new_id] = cells_.size();
  if (options_.index == SeedIndex::UniformGrid) grid_insert(c);
  cells_.push_back(std::move(c));
  if (last_dense_valid_) last_distance_.push_back(0.0);
  else last_distance_sparse_[new_id] = 0.0;
  return {AssignResult::Kind::NewCellCreated, new_id, 0.0, t, 0.0, 1.0};
}

double CellStore::density_at(CellId id, Timestamp t) const {
  const auto& c = cells_[slot_of(id)];
  if (t < c.t_last) throw PreconditionError("density query precedes the cell's last update");
  return decay_density(c.rho_last, c.t_last, t, options_.decay);
}

void CellStore::erase(CellId id) {
  const std::size_t slot = slot_of(id);
  if (options_.index == SeedIndex::UniformGrid) grid_erase(cells_[slot]);
  const std::size_t last = cells_.size() - 1;
  if (slot != last) {
    cells_[slot] = std::move(cells_[last]);
    slot_[cells_[slot].id] = slot;
  }
  cells_.pop_back();
  slot_.erase(id);
  last_dense_valid_ = false;
  last_distance_sparse_.clear();
}

void CellStore::restore(ClusterCell cell) {
  check_dim(cell.seed);
  if (slot_.count(cell.id)) throw StateError("cell id " + std::to_string(cell.id) + " already in use");
  slot_[cell.id] = cells_.size();
  if (options_.index == SeedIndex::UniformGrid) grid_insert(cell);
  cells_.push_back(std::move(cell));
  last_dense_valid_ = false;
}

std::vector<CellId> CellStore::ids() const {
  std::vector<CellId> out;
  out.reserve(cells_.size());
  for (const auto& c : cells_) out.push_back(c.id);
  std::sort(out.begin(), out.end());
  return out;
}

double CellStore::distance_from_last_point(CellId id) const {
  const std::size_t slot = slot_of(id);
  if (last_dense_valid_ && slot < last_distance_.size()) return last_distance_[slot];
  auto it = last_distance_sparse_.find(id);
  if (it != last_distance_sparse_.end()) return it->second;
  ++distance_evals_;
  const double d = options_.metric(last_point_, cells_[slot].seed);
  last_distance_sparse_[id] = d;
  return d;
}

double CellStore::seed_distance(CellId a, CellId b) const {
  ++distance_evals_;
  return options_.metric(cells_[slot_of(a)].seed, cells_[slot_of(b)].seed);
}

}  // namespace dpstream
