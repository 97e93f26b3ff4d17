#include "dpstream/state_io.hpp"

#include <fstream>

#include "dpstream/error.hpp"
#include "json.hpp"

namespace dpstream {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json real(double x) { return std::isinf(x) ? json(nullptr) : json(x); }
double real(const json& j) { return j.is_null() ? kInfinity : j.get<double>(); }

json opt_id(const std::optional<CellId>& id) { return id ? json(*id) : json(nullptr); }
std::optional<CellId> opt_id(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<CellId>();
}

json snapshot_json(const ClusterSnapshot& s) {
  json clusters = json::array();
  for (const auto& c : s.clusters) clusters.push_back({{"id", c.id}, {"members", c.members}});
  return {{"time", s.time}, {"tau", s.tau}, {"clusters", clusters}, {"outliers", s.outlier_cells}};
}

ClusterSnapshot snapshot_from(const json& j) {
  ClusterSnapshot s;
  s.time = j.at("time").get<double>();
  s.tau = j.at("tau").get<double>();
  for (const auto& c : j.at("clusters")) {
    s.clusters.push_back({c.at("id").get<CellId>(), c.at("members").get<std::vector<CellId>>()});
  }
  s.outlier_cells = j.at("outliers").get<std::vector<CellId>>();
  return s;
}

}  // namespace

void save_state(std::ostream& out, const EngineImage& im) {
  json cells = json::array();
  for (const auto& c : im.cells) {
    cells.push_back({{"id", c.id},
                     {"seed", c.seed},
                     {"rho", c.rho_last},
                     {"t", c.t_last},
                     {"active", c.state == CellState::Active}});
  }
  json tree = json::array();
  for (const auto& n : im.tree) tree.push_back({{"id", n.id}, {"parent", opt_id(n.parent)}, {"delta", real(n.delta)}});
  json reservoir = json::array();
  for (const auto& [id, t] : im.reservoir) reservoir.push_back({{"id", id}, {"touched", t}});

  json config = {{"a", im.config.decay.a},
                 {"lambda", im.config.decay.lambda},
                 {"v", im.config.decay.v},
                 {"beta", im.config.decay.beta},
                 {"r", im.config.r},
                 {"tau0", im.config.tau0},
                 {"alpha", im.config.alpha_override ? json(*im.config.alpha_override) : json(nullptr)},
                 {"init_cell_count", im.config.init_cell_count},
                 {"sweep_interval", im.config.sweep_interval},
                 {"recycle", im.config.recycle},
                 {"filters", std::string(to_string(im.config.filters))},
                 {"seed", im.config.seed},
                 {"order", im.config.order == OrderPolicy::Clamp ? "clamp" : "reject"},
                 {"index", im.config.index == SeedIndex::UniformGrid ? "grid" : "linear"},
                 {"ties", im.config.ties == TieBreak::SeededRandom ? "random" : "smallest-id"},
                 {"objective", std::string(to_string(im.config.objective))}};

  json doc = {{"format", kFormatVersion},
              {"config", config},
              {"dim", im.dim},
              {"root_delta", im.root_delta == RootDelta::Exclude ? "exclude" : "max-distance"},
              {"cells", cells},
              {"tree", tree},
              {"reservoir", reservoir},
              {"alpha", im.tau.alpha},
              {"tau", im.tau.tau},
              {"candidates", im.tau.candidates},
              {"processed", im.processed},
              {"time", im.time},
              {"seen_any", im.seen_any},
              {"snapshot", snapshot_json(im.last_snapshot)},
              {"provenance", im.provenance}};
  out << doc.dump(1) << '\n';
}

EngineImage load_state(std::istream& in) {
  try {
    const json doc = json::parse(in);
    if (doc.at("format").get<int>() != kFormatVersion) throw InputError("unsupported state format");
    EngineImage im;
    const json& c = doc.at("config");
    im.config.decay.a = c.at("a").get<double>();
    im.config.decay.lambda = c.at("lambda").get<double>();
    im.config.decay.v = c.at("v").get<double>();
    im.config.decay.beta = c.at("beta").get<double>();
    im.config.r = c.at("r").get<double>();
    im.config.tau0 = c.at("tau0").get<double>();
    if (!c.at("alpha").is_null()) im.config.alpha_override = c.at("alpha").get<double>();
    im.config.init_cell_count = c.at("init_cell_count").get<std::size_t>();
    im.config.sweep_interval = c.at("sweep_interval").get<std::size_t>();
    im.config.recycle = c.at("recycle").get<bool>();
    im.config.filters = parse_filter_mode(c.at("filters").get<std::string>());
    im.config.seed = c.at("seed").get<std::uint64_t>();
    im.config.order = c.at("order").get<std::string>() == "clamp" ? OrderPolicy::Clamp : OrderPolicy::Reject;
    im.config.index = c.at("index").get<std::string>() == "grid" ? SeedIndex::UniformGrid : SeedIndex::LinearScan;
    im.config.ties = c.at("ties").get<std::string>() == "random" ? TieBreak::SeededRandom : TieBreak::SmallestId;

    im.config.objective = parse_objective_form(c.at("objective").get<std::string>());
    im.dim = doc.at("dim").get<std::size_t>();
    im.root_delta = doc.at("root_delta").get<std::string>() == "exclude" ? RootDelta::Exclude : RootDelta::MaxDistance;
    for (const auto& j : doc.at("cells")) {
      ClusterCell cell;
      cell.id = j.at("id").get<CellId>();
      cell.seed = j.at("seed").get<std::vector<double>>();
      cell.rho_last = j.at("rho").get<double>();
      cell.t_last = j.at("t").get<double>();
      cell.state = j.at("active").get<bool>() ? CellState::Active : CellState::Inactive;
      im.cells.push_back(std::move(cell));
    }
    for (const auto& j : doc.at("tree")) {
      im.tree.push_back({j.at("id").get<CellId>(), opt_id(j.at("parent")), real(j.at("delta"))});
    }
    for (const auto& j : doc.at("reservoir")) {
      im.reservoir.emplace_back(j.at("id").get<CellId>(), j.at("touched").get<double>());
    }
    im.tau.alpha = doc.at("alpha").get<double>();
    im.tau.tau = doc.at("tau").get<double>();
    im.tau.candidates = doc.at("candidates").get<std::vector<double>>();
    im.processed = doc.at("processed").get<std::uint64_t>();
    im.time = doc.at("time").get<double>();
    im.seen_any = doc.at("seen_any").get<bool>();
    im.last_snapshot = snapshot_from(doc.at("snapshot"));
    im.provenance = doc.at("provenance").get<std::uint64_t>();
    im.last_snapshot.provenance = im.provenance;
    return im;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed state: ") + e.what());
  }
}

void save_state_file(const std::string& path, const EngineImage& image) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write state: " + path);
  save_state(out, image);
}

EngineImage load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open state: " + path);
  return load_state(in);
}

}  // namespace dpstream
