#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dpstream/engine.hpp"
#include "dpstream/evolution.hpp"
#include "dpstream/tauctl.hpp"

namespace dpstream::cli {

// `cell_id,rho,delta`; the root's infinite delta is drawn at the display value.
void write_decision_graph(std::ostream& out, const std::vector<DecisionGraphPoint>& graph);

// One JSON object per line, keys in the order
// time, kind, old_ids, new_ids, adjust_kind, cause.
std::string event_json(const EvolutionEvent& e);

// `cell_id,cluster_id,rho,delta,x1..xd` for every active cell.
void write_snapshot(std::ostream& out, const Engine& engine);

void write_counters(std::ostream& out, const EngineCounters& c);

}  // namespace dpstream::cli
