#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "dpstream/config.hpp"
#include "dpstream/engine.hpp"
#include "dpstream/error.hpp"
#include "dpstream/oracle.hpp"
#include "dpstream/scenario.hpp"
#include "dpstream/state_io.hpp"
#include "dpstream/stream_io.hpp"
#include "outputs.hpp"

namespace fs = std::filesystem;

namespace dpstream::cli {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

RootDelta root_delta_of(const EngineFlags& f) {
  if (f.root_delta == "max-distance") return RootDelta::MaxDistance;
  if (f.root_delta == "exclude") return RootDelta::Exclude;
  throw ParameterError("root-delta: expected max-distance or exclude");
}

void apply_flags(EngineConfig& c, const EngineFlags& f) {
  c.objective = parse_objective_form(f.objective);
  if (f.index == "linear") c.index = SeedIndex::LinearScan;
  else if (f.index == "grid") c.index = SeedIndex::UniformGrid;
  else throw ParameterError("index: expected linear or grid");
  if (f.order == "reject") c.order = OrderPolicy::Reject;
  else if (f.order == "clamp") c.order = OrderPolicy::Clamp;
  else throw ParameterError("order: expected reject or clamp");
  if (f.ties == "smallest-id") c.ties = TieBreak::SmallestId;
  else if (f.ties == "random") c.ties = TieBreak::SeededRandom;
  else throw ParameterError("ties: expected smallest-id or random");
}

EngineConfig make_config(const std::string& path, std::optional<double> tau0, const EngineFlags& flags) {
  EngineConfig c = path.empty() ? EngineConfig{} : load_config(path);
  if (tau0) c.tau0 = *tau0;
  apply_flags(c, flags);
  c.validate();
  return c;
}

// Reads the first `n` rows and initialises an engine on them.
Engine init_engine(StreamReader& reader, const EngineConfig& config, const EngineFlags& flags, std::size_t n,
                   std::vector<DecisionGraphPoint>* graph) {
  std::vector<StreamPoint> buffer;
  buffer.reserve(n);
  while (buffer.size() < n) {
    auto p = reader.next();
    if (!p) break;
    buffer.push_back(std::move(*p));
  }
  Engine engine(config, reader.dim(), root_delta_of(flags));
  auto g = engine.initialize(buffer);
  if (graph) *graph = std::move(g);
  return engine;
}

class SnapshotWriter {
 public:
  SnapshotWriter(const std::string& dir, const Engine& engine) : dir_(dir) {
    if (dir_.empty()) return;
    fs::create_directories(dir_);
    index_ = open_out((fs::path(dir_) / "index.csv").string());
    index_ << "index,time,tau,clusters,file\n";
    auto conf = open_out((fs::path(dir_) / "engine.conf").string());
    conf << format_config(engine.config());
    assignments_ = open_out((fs::path(dir_) / "assignments.csv").string());
    assignments_ << "point,cell_id\n";
  }

  void snapshot(const Engine& engine) {
    if (dir_.empty()) return;
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%06zu.csv", count_);
    auto out = open_out((fs::path(dir_) / name).string());
    write_snapshot(out, engine);
    const auto& s = engine.last_snapshot();
    index_ << count_ << ',' << format_double(s.time) << ',' << format_double(s.tau) << ',' << s.clusters.size()
           << ',' << name << '\n';
    ++count_;
  }

  void assignment(std::uint64_t point, CellId cell) {
    if (dir_.empty()) return;
    assignments_ << point << ',' << cell << '\n';
  }

 private:
  std::string dir_;
  std::ofstream index_;
  std::ofstream assignments_;
  std::size_t count_ = 0;
};

}  // namespace

void run_gen(const GenOptions& o) {
  const StreamData data = generate(builtin_scenario(o.scenario), o.seed);
  if (o.out.empty()) {
    write_stream(std::cout, data);
  } else {
    auto out = open_out(o.out);
    write_stream(out, data);
  }
}

void run_init(const InitOptions& o) {
  if (!o.tau0) throw ParameterError("--tau0 is required");
  const EngineConfig config = make_config(o.config, o.tau0, o.flags);
  auto in = open_in(o.input);
  StreamReader reader(in);
  std::vector<DecisionGraphPoint> graph;
  Engine engine = init_engine(reader, config, o.flags, o.init_points, &graph);
  if (!o.decision_graph.empty()) {
    auto out = open_out(o.decision_graph);
    write_decision_graph(out, graph);
  }
  if (!o.state.empty()) save_state_file(o.state, engine.image());
  std::cerr << "initialized: " << engine.tree().size() << " active cells, "
            << engine.last_snapshot().clusters.size() << " clusters, alpha=" << engine.tau().alpha << '\n';
}

void run_run(const RunOptions& o) {
  if (o.state.empty() == o.config.empty()) throw ParameterError("give exactly one of --state or --config");
  auto in = open_in(o.input);
  StreamReader reader(in);

  std::optional<Engine> engine;
  std::uint64_t skip = 0;
  if (!o.state.empty()) {
    engine.emplace(Engine::from_image(load_state_file(o.state)));
    if (engine->store().dim() != reader.dim()) throw InputError("stream dimension does not match the state");
    skip = engine->processed();
  } else {
    engine.emplace(init_engine(reader, make_config(o.config, o.tau0, o.flags), o.flags, o.init_points, nullptr));
  }

  std::ofstream events;
  if (!o.events.empty()) events = open_out(o.events);
  SnapshotWriter snapshots(o.snapshots, *engine);
  snapshots.snapshot(*engine);

  std::uint64_t row = o.state.empty() ? engine->processed() : 0;
  const std::uint64_t interval = engine->config().sweep_interval;
  while (auto p = reader.next()) {
    if (row++ < skip) continue;
    const auto emitted = engine->process_point(*p);
    snapshots.assignment(engine->processed() - 1, engine->last_assignment().cell);
    if (events) {
      for (const auto& e : emitted) events << event_json(e) << '\n';
    }
    if (engine->processed() % interval == 0) snapshots.snapshot(*engine);
  }
  if (engine->processed() % interval != 0) {
    const std::size_t before = engine->events().size();
    engine->snapshot();
    if (events) {
      const auto& all = engine->events().all();
      for (std::size_t i = before; i < all.size(); ++i) events << event_json(all[i]) << '\n';
    }
    snapshots.snapshot(*engine);
  }
  if (!o.counters.empty()) {
    auto out = open_out(o.counters);
    write_counters(out, engine->counters());
  }
  if (!o.save_state.empty()) save_state_file(o.save_state, engine->image());
}

void run_eval(const EvalOptions& o) {
  const fs::path dir(o.snapshots);
  auto in = open_in(o.input);
  const StreamData data = read_stream(in);
  if (!data.has_labels) throw UndefinedMetric("input carries no labels");
  const EngineConfig config = load_config((dir / "engine.conf").string());

  std::vector<oracle::LabeledAssignment> points;
  {
    auto a = open_in((dir / "assignments.csv").string());
    std::string line;
    std::getline(a, line);
    std::size_t line_no = 1;
    while (std::getline(a, line)) {
      ++line_no;
      std::uint64_t point = 0;
      CellId cell = 0;
      char comma = 0;
      std::istringstream row(line);
      if (!(row >> point >> comma >> cell) || comma != ',') throw ParseError(line_no, "bad assignment row");
      if (point >= data.points.size()) throw InputError("assignment refers past the end of the input");
      const auto& p = data.points[point];
      points.push_back({cell, p.t, *p.label});
    }
  }

  std::ostringstream report;
  report << "time,metric,value\n";
  auto index = open_in((dir / "index.csv").string());
  std::string line;
  std::getline(index, line);
  while (std::getline(index, line)) {
    std::istringstream row(line);
    std::string idx, time, tau, count, file;
    std::getline(row, idx, ',');
    std::getline(row, time, ',');
    std::getline(row, tau, ',');
    std::getline(row, count, ',');
    std::getline(row, file, ',');
    ClusterSnapshot snap;
    snap.time = std::stod(time);
    std::map<CellId, std::vector<CellId>> groups;
    auto s = open_in((dir / file).string());
    std::string cells;
    std::getline(s, cells);
    while (std::getline(s, cells)) {
      std::istringstream cr(cells);
      std::string id, cluster;
      std::getline(cr, id, ',');
      std::getline(cr, cluster, ',');
      groups[std::stoull(cluster)].push_back(std::stoull(id));
    }
    for (auto& [root, members] : groups) snap.clusters.push_back({root, std::move(members)});
    try {
      const double purity = oracle::weighted_purity(snap, points, config.decay, snap.time);
      report << time << ",weighted_purity," << format_double(purity) << '\n';
    } catch (const UndefinedMetric&) {
      // nothing clustered yet
    }
  }
  if (o.out.empty()) {
    std::cout << report.str();
  } else {
    auto out = open_out(o.out);
    out << report.str();
  }
}

}  // namespace dpstream::cli
