#include "dpstream/dptree.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "dpstream/error.hpp"

namespace dpstream {

FilterVerdict density_filter(double rho_c_before, double rho_cprime_before, double rho_c_after,
                             double rho_cprime_after, CellId c, CellId cprime) {
  const bool above_before = ranks_above(rho_c_before, c, rho_cprime_before, cprime);
  const bool above_after = ranks_above(rho_c_after, c, rho_cprime_after, cprime);
  return (above_before && !above_after) ? FilterVerdict::MustCheck : FilterVerdict::SkipUpdate;
}

FilterVerdict triangle_filter(double dist_point_c, double dist_point_cprime, double delta_c) {
  return std::abs(dist_point_c - dist_point_cprime) > delta_c ? FilterVerdict::SkipUpdate
                                                             : FilterVerdict::MustCheck;
}

namespace {

// Guards the triangle filter against rounding in the three distances.
constexpr double kTriangleSlack = 1e-12;

void erase_child(std::vector<CellId>& children, CellId id) {
  auto it = std::find(children.begin(), children.end(), id);
  if (it != children.end()) {
    *it = children.back();
    children.pop_back();
  }
}

}  // namespace

const DpTree::Node& DpTree::node(CellId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw LookupError("cell " + std::to_string(id) + " is not in the tree");
  return it->second;
}

std::vector<CellId> DpTree::ids() const {
  std::vector<CellId> out;
  out.reserve(nodes_.size());
  for (const auto& [id, n] : nodes_) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

double DpTree::kappa(const CellStore& store) const {
  return store.decay().lambda * -std::log(store.decay().a);
}

DpTree::Key DpTree::key_of(const CellStore& store, CellId id) const {
  const auto& c = store.cell(id);
  return Key{std::log(c.rho_last) + kappa(store) * c.t_last, id};
}

void DpTree::index_insert(const CellStore& store, CellId id) {
  const Key k = key_of(store, id);
  index_.insert(k);
  keys_[id] = k;
}

void DpTree::index_erase(CellId id) {
  auto it = keys_.find(id);
  if (it == keys_.end()) return;
  index_.erase(it->second);
  keys_.erase(it);
}

double DpTree::seed_distance(const CellStore& store, CellId a, CellId b) const {
  ++counters_.distance_evaluations;
  return store.metric()(store.cell(a).seed, store.cell(b).seed);
}

void DpTree::set_dependency(CellId id, const Dependency& dep) {
  auto& n = nodes_.at(id);
  if (n.parent) erase_child(nodes_.at(*n.parent).children, id);
  n.parent = dep.parent;
  n.delta = dep.delta;
  if (n.parent) nodes_.at(*n.parent).children.push_back(id);
}

bool DpTree::adopts(const Node& n, CellId candidate, double distance) const {
  if (distance < n.delta) return true;
  return distance == n.delta && n.parent && candidate < *n.parent;
}

std::vector<CellId> DpTree::band(const CellStore& store, double lo, double hi, Timestamp t) const {
  const double shift = kappa(store) * t;
  const double slack = 1e-7 + 1e-12 * std::abs(shift);
  const double key_hi = std::isinf(hi) ? kInfinity : std::log(hi) + shift + slack;
  const double key_lo = lo > 0.0 ? std::log(lo) + shift - slack : -kInfinity;
  std::vector<CellId> out;
  for (auto it = index_.lower_bound(Key{key_hi, 0}); it != index_.end(); ++it) {
    if (it->log_density < key_lo) break;
    out.push_back(it->id);
  }
  return out;
}

Dependency DpTree::compute_dependency(const CellStore& store, CellId c, Timestamp t) const {
  if (!store.contains(c) || store.cell(c).state != CellState::Active) {
    throw StateError("cell " + std::to_string(c) + " is not active");
  }
  const double rho_c = store.density_at(c, t);
  std::vector<CellId> candidates;
  if (filters_ == FilterMode::Off) {
    candidates.reserve(nodes_.size());
    for (const auto& [id, n] : nodes_) candidates.push_back(id);
  } else {
    candidates = band(store, rho_c, kInfinity, t);
  }
  Dependency best;
  for (CellId e : candidates) {
    if (e == c) continue;
    if (!ranks_above(store.density_at(e, t), e, rho_c, c)) continue;
    const double d = seed_distance(store, c, e);
    if (d < best.delta || (d == best.delta && best.parent && e < *best.parent)) {
      best.parent = e;
      best.delta = d;
    }
  }
  return best;
}

std::vector<Relink> DpTree::on_density_increase(const CellStore& store, CellId cprime,
                                                double rho_before, Timestamp t) {
  auto it = nodes_.find(cprime);
  if (it == nodes_.end()) throw StateError("cell " + std::to_string(cprime) + " is not active");
  index_erase(cprime);
  index_insert(store, cprime);
  const double rho_after = store.density_at(cprime, t);

  std::vector<Relink> relinks;

  // Its own denser set only shrank: the old parent stays optimal if it is
  // still denser.
  {
    Node& self = it->second;
    bool keep = !self.parent.has_value();
    if (self.parent) keep = ranks_above(store.density_at(*self.parent, t), *self.parent, rho_after, cprime);
    if (!keep) {
      const Relink r{cprime, self.parent, std::nullopt, self.delta, kInfinity};
      const Dependency dep = compute_dependency(store, cprime, t);
      set_dependency(cprime, dep);
      if (dep.parent != r.old_parent || dep.delta != r.old_delta) {
        relinks.push_back({cprime, r.old_parent, dep.parent, r.old_delta, dep.delta});
        ++counters_.relinks;
      }
    }
  }

  auto consider = [&](CellId c) {
    Node& n = nodes_.at(c);
    const double d = seed_distance(store, c, cprime);
    ++counters_.candidates_checked;
    if (!adopts(n, cprime, d)) return;
    relinks.push_back({c, n.parent, cprime, n.delta, d});
    set_dependency(c, Dependency{cprime, d});
    ++counters_.relinks;
  };

  if (filters_ == FilterMode::Off) {
    std::vector<CellId> all = ids();
    for (CellId c : all) {
      if (c == cprime) continue;
      const double rho_c = store.density_at(c, t);
      Node& n = nodes_.at(c);
      const double d = seed_distance(store, c, cprime);
      ++counters_.candidates_checked;
      if (!ranks_above(rho_after, cprime, rho_c, c)) continue;
      if (!adopts(n, cprime, d)) continue;
      relinks.push_back({c, n.parent, cprime, n.delta, d});
      set_dependency(c, Dependency{cprime, d});
      ++counters_.relinks;
    }
    return relinks;
  }

  std::vector<CellId> candidates = band(store, rho_before, rho_after, t);
  std::sort(candidates.begin(), candidates.end());
  counters_.density_filter_skips += nodes_.size() - 1 - std::min(nodes_.size() - 1, candidates.size());
  const bool triangle = filters_ == FilterMode::Both && store.metric().satisfies_triangle_inequality();
  for (CellId c : candidates) {
    if (c == cprime) continue;
    const double rho_c = store.density_at(c, t);
    if (density_filter(rho_c, rho_before, rho_c, rho_after, c, cprime) == FilterVerdict::SkipUpdate) {
      ++counters_.density_filter_skips;
      continue;
    }
    if (triangle) {
      const double slack = nodes_.at(c).delta * (1.0 + kTriangleSlack);
      if (triangle_filter(store.distance_from_last_point(c), store.distance_from_last_point(cprime),
                          slack) == FilterVerdict::SkipUpdate) {
        ++counters_.triangle_filter_skips;
        continue;
      }
    }
    consider(c);
  }
  return relinks;
}

std::vector<Relink> DpTree::insert_active(const CellStore& store, CellId c, Timestamp t,
                                          bool after_absorb) {
  if (nodes_.count(c)) throw StateError("cell " + std::to_string(c) + " is already active");
  const double rho_c = store.density_at(c, t);
  const Dependency dep = compute_dependency(store, c, t);
  nodes_[c] = Node{};
  index_insert(store, c);
  set_dependency(c, dep);

  std::vector<Relink> relinks;
  relinks.push_back({c, std::nullopt, dep.parent, kInfinity, dep.delta});

  std::vector<CellId> candidates;
  if (filters_ == FilterMode::Off) {
    candidates = ids();
  } else {
    candidates = band(store, 0.0, rho_c, t);
    std::sort(candidates.begin(), candidates.end());
    counters_.density_filter_skips += nodes_.size() - 1 - std::min(nodes_.size() - 1, candidates.size());
  }
  const bool triangle = filters_ == FilterMode::Both && after_absorb &&
                        store.metric().satisfies_triangle_inequality();
  for (CellId e : candidates) {
    if (e == c) continue;
    Node& n = nodes_.at(e);
    if (filters_ == FilterMode::Off) {
      const double d = seed_distance(store, e, c);
      ++counters_.candidates_checked;
      if (!ranks_above(rho_c, c, store.density_at(e, t), e) || !adopts(n, c, d)) continue;
      relinks.push_back({e, n.parent, c, n.delta, d});
      set_dependency(e, Dependency{c, d});
      ++counters_.relinks;
      continue;
    }
    if (!ranks_above(rho_c, c, store.density_at(e, t), e)) {
      ++counters_.density_filter_skips;
      continue;
    }
    if (triangle && triangle_filter(store.distance_from_last_point(e), store.distance_from_last_point(c),
                                    n.delta * (1.0 + kTriangleSlack)) == FilterVerdict::SkipUpdate) {
      ++counters_.triangle_filter_skips;
      continue;
    }
    const double d = seed_distance(store, e, c);
    ++counters_.candidates_checked;
    if (!adopts(n, c, d)) continue;
    relinks.push_back({e, n.parent, c, n.delta, d});
    set_dependency(e, Dependency{c, d});
    ++counters_.relinks;
  }
  return relinks;
}

std::vector<CellId> DpTree::remove_subtree(CellId c) {
  auto it = nodes_.find(c);
  if (it == nodes_.end()) throw StateError("cell " + std::to_string(c) + " is not active");
  if (it->second.parent) erase_child(nodes_.at(*it->second.parent).children, c);

  std::vector<CellId> removed;
  std::vector<CellId> stack{c};
  while (!stack.empty()) {
    const CellId id = stack.back();
    stack.pop_back();
    auto& n = nodes_.at(id);
    stack.insert(stack.end(), n.children.begin(), n.children.end());
    removed.push_back(id);
  }
  for (CellId id : removed) {
    index_erase(id);
    nodes_.erase(id);
  }
  std::sort(removed.begin(), removed.end());
  return removed;
}

std::vector<CellId> DpTree::cells_below(const CellStore& store, double threshold, Timestamp t) const {
  std::vector<CellId> out;
  for (CellId id : band(store, 0.0, threshold, t)) {
    if (store.density_at(id, t) < threshold) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ClusterSnapshot DpTree::extract_clusters(double tau, Timestamp t) const {
  if (!(tau > 0.0)) throw ParameterError("tau must be positive");
  std::unordered_map<CellId, CellId> root_of;
  root_of.reserve(nodes_.size());
  std::vector<CellId> path;
  for (const auto& [id, n] : nodes_) {
    CellId cur = id;
    path.clear();
    CellId root = 0;
    while (true) {
      auto memo = root_of.find(cur);
      if (memo != root_of.end()) {
        root = memo->second;
        break;
      }
      const Node& cn = nodes_.at(cur);
      path.push_back(cur);
      if (!cn.parent || cn.delta > tau) {
        root = cur;
        break;
      }
      cur = *cn.parent;
    }
    for (CellId p : path) root_of[p] = root;
  }
  std::unordered_map<CellId, std::vector<CellId>> groups;
  for (const auto& [id, root] : root_of) groups[root].push_back(id);

  ClusterSnapshot snap;
  snap.time = t;
  snap.tau = tau;
  snap.clusters.reserve(groups.size());
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    snap.clusters.push_back(Cluster{root, std::move(members)});
  }
  std::sort(snap.clusters.begin(), snap.clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.id < b.id; });
  return snap;
}

void DpTree::build(const CellStore& store, std::span<const CellId> cells, Timestamp t) {
  nodes_.clear();
  index_.clear();
  keys_.clear();
  struct Entry {
    CellId id;
    double rho;
  };
  std::vector<Entry> order;
  order.reserve(cells.size());
  for (CellId id : cells) order.push_back({id, store.density_at(id, t)});
  std::sort(order.begin(), order.end(),
            [](const Entry& x, const Entry& y) { return ranks_above(x.rho, x.id, y.rho, y.id); });
  for (std::size_t i = 0; i < order.size(); ++i) {
    Dependency best;
    for (std::size_t j = 0; j < i; ++j) {
      const double d = seed_distance(store, order[i].id, order[j].id);
      if (d < best.delta || (d == best.delta && best.parent && order[j].id < *best.parent)) {
        best.parent = order[j].id;
        best.delta = d;
      }
    }
    nodes_[order[i].id] = Node{best.parent, best.delta, {}};
  }
  for (auto& [id, n] : nodes_) {
    if (n.parent) nodes_.at(*n.parent).children.push_back(id);
  }
  for (const auto& e : order) index_insert(store, e.id);
}

void DpTree::restore_node(CellId id, std::optional<CellId> parent, double delta) {
  nodes_[id] = Node{parent, delta, {}};
}

void DpTree::finish_restore(const CellStore& store) {
  index_.clear();
  keys_.clear();
  for (auto& [id, n] : nodes_) n.children.clear();
  for (auto& [id, n] : nodes_) {
    if (n.parent) {
      auto p = nodes_.find(*n.parent);
      if (p == nodes_.end()) throw StateError("restored node links to a missing parent");
      p->second.children.push_back(id);
    }
    index_insert(store, id);
  }
}

}  // namespace dpstream
