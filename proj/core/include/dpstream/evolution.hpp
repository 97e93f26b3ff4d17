#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dpstream/dptree.hpp"

namespace dpstream {

enum class EventKind { Emerge, Disappear, Split, Merge, Adjust };
enum class AdjustKind { None, MovedBetweenClusters, OutliersJoined, BecameOutliers };
// The tree mutation behind an event.
enum class Cause { LinkCrossedTau, Activation, Deactivation, Relink };

struct EvolutionEvent {
  Timestamp time = 0.0;
  EventKind kind = EventKind::Adjust;
  std::vector<CellId> old_ids;  // clusters before (by root id)
  std::vector<CellId> new_ids;  // clusters after
  AdjustKind adjust = AdjustKind::None;
  Cause cause = Cause::Relink;

  bool operator==(const EvolutionEvent&) const = default;
};

std::string_view to_string(EventKind kind);
std::string_view to_string(AdjustKind kind);
std::string_view to_string(Cause cause);

// Net change in cluster count implied by an event.
int cluster_count_delta(const EvolutionEvent& e);

// Classifies what happened between two snapshots of the same engine.
// Cluster identity is the root cell id. Events come out ordered: merges and
// splits, then emergences and disappearances, then adjustments.
std::vector<EvolutionEvent> diff_snapshots(const ClusterSnapshot& prev, const ClusterSnapshot& next);

struct TimeRange {
  Timestamp lo = 0.0;
  Timestamp hi = 0.0;
  bool include_lo = true;
  bool include_hi = true;
};

// Append-only, time-ordered.
class EventLog {
 public:
  void append(EvolutionEvent event);
  void append(const std::vector<EvolutionEvent>& events);
  std::vector<EvolutionEvent> query(const TimeRange& range) const;
  const std::vector<EvolutionEvent>& all() const { return events_; }
  std::size_t size() const { return events_.size(); }

 private:
  std::vector<EvolutionEvent> events_;
};

}  // namespace dpstream
