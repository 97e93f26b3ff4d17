#include "dpstream/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "dpstream/error.hpp"

namespace dpstream {

namespace {

CellStoreOptions store_options(const EngineConfig& c, std::size_t dim, Metric metric) {
  CellStoreOptions o;
  o.dim = dim;
  o.radius = c.r;
  o.decay = c.decay;
  o.metric = std::move(metric);
  o.index = c.index;
  o.order = c.order;
  o.ties = c.ties;
  o.seed = c.seed;
  return o;
}

const EngineConfig& checked(const EngineConfig& c) {
  c.validate();
  return c;
}

std::uint64_t next_provenance(const EngineConfig& c) {
  static std::atomic<std::uint64_t> serial{0};
  const std::uint64_t n = ++serial;
  return c.fingerprint() ^ (n * 0x9e3779b97f4a7c15ull);
}

}  // namespace

Engine::Engine(EngineConfig config, std::size_t dim, RootDelta root_delta, Metric metric)
    : config_(checked(config)),
      root_delta_(root_delta),
      store_(store_options(config_, dim, std::move(metric))),
      tree_(config_.filters),
      reservoir_(config_.decay),
      provenance_(next_provenance(config_)) {
  tau_.tau = config_.tau0;
}

void Engine::ingest(const StreamPoint& p) {
  const CellId id = processed_;
  last_assignment_ = store_.assign_point(p, id);
  ++processed_;
  const AssignResult& a = last_assignment_;
  if (a.kind == AssignResult::Kind::NewCellCreated) {
    ++cells_created_;
    reservoir_.put(a.cell, a.t);
  } else if (store_.cell(a.cell).state == CellState::Active) {
    tree_.on_density_increase(store_, a.cell, a.rho_before, a.t);
    return;
  } else {
    reservoir_.touch(a.cell, a.t);
  }
  if (!initialized_) return;
  if (reservoir_.try_activate(store_, tree_, a.cell, a.t).outcome == Activation::Activated) {
    ++activations_;
  }
}

std::vector<DecisionGraphPoint> Engine::initialize(std::span<const StreamPoint> buffer) {
  if (initialized_) throw StateError("engine already initialized");
  for (const auto& p : buffer) ingest(p);
  if (store_.size() < config_.init_cell_count) {
    throw InitializationError("buffer yields " + std::to_string(store_.size()) + " cells, need " +
                              std::to_string(config_.init_cell_count));
  }
  const Timestamp t = store_.last_time();
  std::vector<CellId> active;
  for (CellId id : store_.ids()) {
    if (store_.density_at(id, t) >= reservoir_.threshold()) active.push_back(id);
  }
  if (active.size() < 2) {
    throw InitializationError("only " + std::to_string(active.size()) +
                              " cells reach the activation threshold, need 2");
  }
  for (CellId id : active) store_.set_state(id, CellState::Active);
  tree_.build(store_, active, t);
  // Every cell still in the reservoir keeps the time of its last absorption.
  OutlierReservoir fresh(config_.decay);
  for (const auto& c : store_.cells()) {
    if (c.state == CellState::Inactive) fresh.put(c.id, c.t_last);
  }
  reservoir_ = std::move(fresh);

  const auto deltas = objective_deltas();
  tau_.alpha = config_.alpha_override ? *config_.alpha_override : learn_alpha(deltas, config_.tau0, config_.objective);
  tau_.tau = config_.tau0;
  tau_.candidates = candidate_taus(deltas);
  initialized_ = true;
  last_snapshot_ = current_snapshot(t);
  return decision_graph();
}

std::vector<EvolutionEvent> Engine::process_point(const StreamPoint& p) {
  if (!initialized_) throw StateError("engine not initialized");
  ingest(p);
  if (processed_ % config_.sweep_interval != 0) return {};
  return sweep(store_.last_time());
}

ClusterSnapshot Engine::snapshot() {
  if (!initialized_) throw StateError("engine not initialized");
  sweep(store_.last_time());
  return last_snapshot_;
}

std::vector<EvolutionEvent> Engine::sweep(Timestamp t) {
  ++sweeps_;
  for (const auto& moved : reservoir_.deactivate_sweep(store_, tree_, t)) {
    deactivations_ += moved.size();
  }
  if (config_.recycle) recycled_ += reservoir_.recycle(store_, t).size();
  reselect_tau();
  ClusterSnapshot next = current_snapshot(t);
  auto events = diff_snapshots(last_snapshot_, next);
  log_.append(events);
  last_snapshot_ = std::move(next);
  return events;
}

void Engine::reselect_tau() {
  const auto deltas = objective_deltas();
  try {
    tau_.tau = select_tau(tau_.alpha, deltas, config_.objective);
    tau_.candidates = candidate_taus(deltas);
  } catch (const UndefinedObjective&) {
    ++tau_retained_;
  }
}

ClusterSnapshot Engine::current_snapshot(Timestamp t) const {
  ClusterSnapshot s = tree_.extract_clusters(tau_.tau, t);
  s.outlier_cells = reservoir_.ids();
  s.provenance = provenance_;
  return s;
}

std::vector<double> Engine::objective_deltas() const {
  std::vector<double> out;
  out.reserve(tree_.size());
  std::optional<CellId> root;
  for (CellId id : tree_.ids()) {
    const auto& n = tree_.node(id);
    if (n.parent) out.push_back(n.delta);
    else root = id;
  }
  if (root_delta_ == RootDelta::MaxDistance && root && tree_.size() > 1) {
    double far = 0.0;
    for (CellId id : tree_.ids()) {
      if (id != *root) far = std::max(far, store_.seed_distance(*root, id));
    }
    out.push_back(far);
  }
  return out;
}

std::vector<DecisionGraphPoint> Engine::decision_graph() const {
  return dpstream::decision_graph(store_, tree_, store_.last_time());
}

EngineCounters Engine::counters() const {
  EngineCounters c;
  c.points = processed_;
  c.cells_created = cells_created_;
  c.activations = activations_;
  c.deactivations = deactivations_;
  c.recycled = recycled_;
  c.sweeps = sweeps_;
  c.tau_retained = tau_retained_;
  c.assign_distance_evaluations = store_.distance_evaluations();
  c.tree = tree_.counters();
  return c;
}

EngineImage Engine::image() const {
  if (!initialized_) throw StateError("engine not initialized");
  EngineImage im;
  im.config = config_;
  im.dim = store_.dim();
  im.root_delta = root_delta_;
  im.cells.assign(store_.cells().begin(), store_.cells().end());
  std::sort(im.cells.begin(), im.cells.end(),
            [](const ClusterCell& a, const ClusterCell& b) { return a.id < b.id; });
  for (CellId id : tree_.ids()) {
    const auto& n = tree_.node(id);
    im.tree.push_back({id, n.parent, n.delta});
  }
  for (CellId id : reservoir_.ids()) im.reservoir.emplace_back(id, reservoir_.last_touch(id));
  im.tau = tau_;
  im.processed = processed_;
  im.time = store_.last_time();
  im.seen_any = processed_ > 0;
  im.last_snapshot = last_snapshot_;
  im.provenance = provenance_;
  return im;
}

Engine Engine::from_image(const EngineImage& im, Metric metric) {
  Engine e(im.config, im.dim, im.root_delta, std::move(metric));
  for (const auto& c : im.cells) e.store_.restore(c);
  if (im.seen_any) e.store_.set_last_time(im.time);
  for (const auto& n : im.tree) {
    if (!e.store_.contains(n.id) || e.store_.cell(n.id).state != CellState::Active) {
      throw StateError("tree node " + std::to_string(n.id) + " is not an active cell");
    }
    e.tree_.restore_node(n.id, n.parent, n.delta);
  }
  e.tree_.finish_restore(e.store_);
  for (const auto& [id, t] : im.reservoir) {
    if (!e.store_.contains(id) || e.store_.cell(id).state != CellState::Inactive) {
      throw StateError("reservoir entry " + std::to_string(id) + " is not an inactive cell");
    }
    e.reservoir_.put(id, t);
  }
  if (e.tree_.size() + e.reservoir_.size() != e.store_.size()) {
    throw StateError("state has cells outside both the tree and the reservoir");
  }
  e.tau_ = im.tau;
  e.processed_ = im.processed;
  e.last_snapshot_ = im.last_snapshot;
  e.last_snapshot_.provenance = im.provenance;
  e.provenance_ = im.provenance;
  e.initialized_ = true;
  return e;
}

}  // namespace dpstream
