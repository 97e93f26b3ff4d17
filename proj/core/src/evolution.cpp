#include "dpstream/evolution.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

#include "dpstream/error.hpp"

namespace dpstream {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Emerge: return "emerge";
    case EventKind::Disappear: return "disappear";
    case EventKind::Split: return "split";
    case EventKind::Merge: return "merge";
    case EventKind::Adjust: return "adjust";
  }
  return "unknown";
}

std::string_view to_string(AdjustKind kind) {
  switch (kind) {
    case AdjustKind::None: return "";
    case AdjustKind::MovedBetweenClusters: return "moved_between_clusters";
    case AdjustKind::OutliersJoined: return "outliers_joined";
    case AdjustKind::BecameOutliers: return "became_outliers";
  }
  return "unknown";
}

std::string_view to_string(Cause cause) {
  switch (cause) {
    case Cause::LinkCrossedTau: return "link_crossed_tau";
    case Cause::Activation: return "activation";
    case Cause::Deactivation: return "deactivation";
    case Cause::Relink: return "relink";
  }
  return "unknown";
}

int cluster_count_delta(const EvolutionEvent& e) {
  switch (e.kind) {
    case EventKind::Emerge: return 1;
    case EventKind::Disappear: return -1;
    case EventKind::Split: return static_cast<int>(e.new_ids.size()) - 1;
    case EventKind::Merge: return 1 - static_cast<int>(e.old_ids.size());
    case EventKind::Adjust: return 0;
  }
  return 0;
}

namespace {

using Members = std::unordered_map<CellId, const std::vector<CellId>*>;

std::unordered_map<CellId, CellId> owner_map(const ClusterSnapshot& s) {
  std::unordered_map<CellId, CellId> owner;
  for (const auto& c : s.clusters) {
    for (CellId m : c.members) owner[m] = c.id;
  }
  return owner;
}

}  // namespace

std::vector<EvolutionEvent> diff_snapshots(const ClusterSnapshot& prev, const ClusterSnapshot& next) {
  if (prev.provenance != next.provenance) throw ProvenanceError("snapshots come from different engines");
  if (prev.time > next.time) throw PreconditionError("snapshots out of order");

  const auto old_owner = owner_map(prev);
  const auto new_owner = owner_map(next);
  Members old_members;
  Members new_members;
  for (const auto& c : prev.clusters) old_members[c.id] = &c.members;
  for (const auto& c : next.clusters) new_members[c.id] = &c.members;

  std::map<CellId, CellId> pred;          // new cluster -> old cluster it continues
  std::set<CellId> matched;               // old clusters that continue
  std::map<CellId, CellId> merged_into;   // old cluster -> new cluster absorbing it
  std::map<CellId, std::vector<CellId>> splits;  // old cluster -> split-off new clusters
  std::set<CellId> disappeared;
  std::vector<CellId> emerged;

  auto match = [&](CellId j, CellId k) {
    pred[j] = k;
    matched.insert(k);
  };

  // Surviving roots keep their identity.
  for (const auto& c : next.clusters) {
    if (old_members.count(c.id)) match(c.id, c.id);
  }

  // Old roots that are now ordinary members somewhere.
  std::map<CellId, std::vector<CellId>> demoted;  // new cluster -> old clusters
  for (const auto& c : prev.clusters) {
    if (matched.count(c.id)) continue;
    auto it = new_owner.find(c.id);
    if (it != new_owner.end()) demoted[it->second].push_back(c.id);
  }

  // The peak moved inside one cluster: the new root was a member of the old
  // cluster whose root it displaced.
  for (const auto& c : next.clusters) {
    if (pred.count(c.id)) continue;
    auto owner = old_owner.find(c.id);
    if (owner == old_owner.end()) continue;
    auto d = demoted.find(c.id);
    if (d == demoted.end()) continue;
    auto& list = d->second;
    auto hit = std::find(list.begin(), list.end(), owner->second);
    if (hit == list.end()) continue;
    match(c.id, owner->second);
    list.erase(hit);
  }

  // Remaining demoted roots were absorbed by another cluster.
  for (auto& [j, list] : demoted) {
    std::sort(list.begin(), list.end(), [&](CellId a, CellId b) {
      const auto sa = old_members.at(a)->size();
      const auto sb = old_members.at(b)->size();
      return sa != sb ? sa > sb : a < b;
    });
    for (CellId k : list) {
      if (!pred.count(j)) {
        match(j, k);
      } else {
        merged_into[k] = j;
      }
    }
  }

  // Roots that left the tree: a new cluster inherits the identity only when
  // it holds more than half of the old members.
  for (const auto& c : prev.clusters) {
    if (matched.count(c.id) || merged_into.count(c.id)) continue;
    std::map<CellId, std::size_t> landing;
    for (CellId m : c.members) {
      auto it = new_owner.find(m);
      if (it != new_owner.end()) ++landing[it->second];
    }
    if (landing.empty()) {
      disappeared.insert(c.id);
      continue;
    }
    auto best = std::max_element(landing.begin(), landing.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second < b.second : a.first > b.first;
    });
    const CellId j = best->first;
    const bool majority = 2 * best->second > c.members.size();
    if (!pred.count(j) && majority) {
      match(j, c.id);
    } else if (pred.count(j)) {
      merged_into[c.id] = j;
    } else {
      disappeared.insert(c.id);
    }
  }

  // Unexplained new clusters split off an existing one or emerged.
  for (const auto& c : next.clusters) {
    if (pred.count(c.id)) continue;
    std::optional<CellId> source;
    auto owner = old_owner.find(c.id);
    if (owner != old_owner.end() && (matched.count(owner->second) || merged_into.count(owner->second))) {
      source = owner->second;
    } else {
      std::map<CellId, std::size_t> overlap;
      for (CellId m : c.members) {
        auto it = old_owner.find(m);
        if (it != old_owner.end() && (matched.count(it->second) || merged_into.count(it->second))) {
          ++overlap[it->second];
        }
      }
      if (!overlap.empty()) {
        source = std::max_element(overlap.begin(), overlap.end(), [](const auto& a, const auto& b) {
                   return a.second != b.second ? a.second < b.second : a.first > b.first;
                 })->first;
      }
    }
    if (source) {
      splits[*source].push_back(c.id);
    } else {
      emerged.push_back(c.id);
    }
  }

  const Timestamp t = next.time;
  std::vector<EvolutionEvent> events;

  std::map<CellId, std::vector<CellId>> merges;  // new cluster -> absorbed old clusters
  for (const auto& [k, j] : merged_into) merges[j].push_back(k);
  for (auto& [j, absorbed] : merges) {
    std::vector<CellId> olds = absorbed;
    olds.push_back(pred.at(j));
    std::sort(olds.begin(), olds.end());
    events.push_back({t, EventKind::Merge, std::move(olds), {j}, AdjustKind::None, Cause::LinkCrossedTau});
  }

  std::map<CellId, CellId> continuation;  // old -> new
  for (const auto& [j, k] : pred) continuation[k] = j;
  for (auto& [k, offs] : splits) {
    std::vector<CellId> news = offs;
    if (auto it = continuation.find(k); it != continuation.end()) news.push_back(it->second);
    else news.push_back(merged_into.at(k));
    std::sort(news.begin(), news.end());
    events.push_back({t, EventKind::Split, {k}, std::move(news), AdjustKind::None, Cause::LinkCrossedTau});
  }

  for (CellId j : emerged) {
    events.push_back({t, EventKind::Emerge, {}, {j}, AdjustKind::None, Cause::Activation});
  }
  for (CellId k : disappeared) {
    events.push_back({t, EventKind::Disappear, {k}, {}, AdjustKind::None, Cause::Deactivation});
  }

  for (const auto& [j, k] : pred) {
    const auto& now = *new_members.at(j);
    const auto& before = *old_members.at(k);
    bool joined = false;
    bool moved = j != k;
    for (CellId m : now) {
      auto it = old_owner.find(m);
      if (it == old_owner.end()) {
        joined = true;
      } else if (it->second != k) {
        auto merged = merged_into.find(it->second);
        if (merged == merged_into.end() || merged->second != j) moved = true;
      }
    }
    bool left = false;
    for (CellId m : before) {
      if (!new_owner.count(m)) left = true;
    }
    if (moved) {
      events.push_back({t, EventKind::Adjust, {k}, {j}, AdjustKind::MovedBetweenClusters, Cause::Relink});
    }
    if (joined) {
      events.push_back({t, EventKind::Adjust, {k}, {j}, AdjustKind::OutliersJoined, Cause::Activation});
    }
    if (left) {
      events.push_back({t, EventKind::Adjust, {k}, {j}, AdjustKind::BecameOutliers, Cause::Deactivation});
    }
  }
  return events;
}

void EventLog::append(EvolutionEvent event) {
  if (!events_.empty() && event.time < events_.back().time) {
    throw OrderingError("event appended out of time order");
  }
  events_.push_back(std::move(event));
}

void EventLog::append(const std::vector<EvolutionEvent>& events) {
  for (const auto& e : events) append(e);
}

std::vector<EvolutionEvent> EventLog::query(const TimeRange& range) const {
  std::vector<EvolutionEvent> out;
  for (const auto& e : events_) {
    const bool above = range.include_lo ? e.time >= range.lo : e.time > range.lo;
    const bool below = range.include_hi ? e.time <= range.hi : e.time < range.hi;
    if (above && below) out.push_back(e);
  }
  return out;
}

}  // namespace dpstream
