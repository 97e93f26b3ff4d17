#include "outputs.hpp"

#include <cmath>
#include <ostream>
#include <unordered_map>

#include "dpstream/stream_io.hpp"
#include "json.hpp"

namespace dpstream::cli {

void write_decision_graph(std::ostream& out, const std::vector<DecisionGraphPoint>& graph) {
  const double shown = display_delta(graph);
  out << "cell_id,rho,delta\n";
  for (const auto& p : graph) {
    out << p.id << ',' << format_double(p.rho) << ',' << format_double(std::isinf(p.delta) ? shown : p.delta)
        << '\n';
  }
}

std::string event_json(const EvolutionEvent& e) {
  nlohmann::ordered_json j;
  j["time"] = e.time;
  j["kind"] = std::string(to_string(e.kind));
  j["old_ids"] = e.old_ids;
  j["new_ids"] = e.new_ids;
  j["adjust_kind"] = e.kind == EventKind::Adjust ? nlohmann::ordered_json(std::string(to_string(e.adjust)))
                                                 : nlohmann::ordered_json(nullptr);
  j["cause"] = std::string(to_string(e.cause));
  return j.dump();
}

void write_snapshot(std::ostream& out, const Engine& engine) {
  const auto& snap = engine.last_snapshot();
  std::unordered_map<CellId, CellId> cluster_of;
  for (const auto& c : snap.clusters) {
    for (CellId m : c.members) cluster_of[m] = c.id;
  }
  out << "cell_id,cluster_id,rho,delta";
  for (std::size_t i = 1; i <= engine.store().dim(); ++i) out << ",x" << i;
  out << '\n';
  const auto& tree = engine.tree();
  for (CellId id : tree.ids()) {
    out << id << ',' << cluster_of.at(id) << ',' << format_double(engine.store().density_at(id, snap.time)) << ','
        << format_double(tree.node(id).delta);
    for (double x : engine.store().cell(id).seed) out << ',' << format_double(x);
    out << '\n';
  }
}

void write_counters(std::ostream& out, const EngineCounters& c) {
  out << "counter,value\n"
      << "points," << c.points << '\n'
      << "cells_created," << c.cells_created << '\n'
      << "activations," << c.activations << '\n'
      << "deactivations," << c.deactivations << '\n'
      << "recycled," << c.recycled << '\n'
      << "sweeps," << c.sweeps << '\n'
      << "tau_retained," << c.tau_retained << '\n'
      << "assign_distance_evaluations," << c.assign_distance_evaluations << '\n'
      << "tree_distance_evaluations," << c.tree.distance_evaluations << '\n'
      << "distance_evaluations," << c.distance_evaluations() << '\n'
      << "density_filter_skips," << c.tree.density_filter_skips << '\n'
      << "triangle_filter_skips," << c.tree.triangle_filter_skips << '\n'
      << "candidates_checked," << c.tree.candidates_checked << '\n'
      << "relinks," << c.tree.relinks << '\n';
}

}  // namespace dpstream::cli
