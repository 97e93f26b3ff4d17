#include "dpstream/scenario.hpp"

#include <cmath>
#include <random>

#include "dpstream/error.hpp"

namespace dpstream {

void PlantedScenario::validate() const {
  if (dim == 0) throw ScenarioError("dimension must be positive");
  if (!(v > 0.0)) throw ScenarioError("rate must be positive");
  if (epochs.empty()) throw ScenarioError("no epochs");
  Timestamp expect = 0.0;
  for (const auto& e : epochs) {
    if (e.start != expect) throw ScenarioError("epochs are not contiguous");
    if (!(e.end > e.start)) throw ScenarioError("empty epoch");
    expect = e.end;
    if (e.sources.empty()) throw ScenarioError("epoch without sources");
    double total = 0.0;
    for (const auto& s : e.sources) {
      if (s.from.size() != dim || s.to.size() != dim) throw ScenarioError("source centre has wrong dimension");
      if (!(s.rate > 0.0) || !(s.stddev > 0.0)) throw ScenarioError("source rate and stddev must be positive");
      total += s.rate;
    }
    if (std::abs(total - v) > 1e-9 * v) {
      throw ScenarioError("source rates sum to " + std::to_string(total) + ", expected " + std::to_string(v));
    }
  }
}

namespace {

Source src(std::string label, std::vector<double> from, std::vector<double> to, double sd, double rate) {
  return Source{std::move(label), std::move(from), std::move(to), sd, rate};
}

}  // namespace

PlantedScenario sds_scenario() {
  PlantedScenario s;
  s.name = "sds";
  s.dim = 2;
  s.v = 1000.0;
  const double sd = 0.5;
  // Approach.
  s.epochs.push_back({0.0, 9.0, {src("L", {-3.7, 0.0}, {-0.6, 0.0}, sd, 500.0),
                                 src("R", {3.7, 0.0}, {0.6, 0.0}, sd, 500.0)}});
  // One merged mountain.
  s.epochs.push_back({9.0, 12.0, {src("L", {-0.6, 0.0}, {-0.3, 0.0}, sd, 500.0),
                                  src("R", {0.6, 0.0}, {0.3, 0.0}, sd, 500.0)}});
  // A newcomer appears on the right while the merged cluster thins out.
  s.epochs.push_back({12.0, 13.0, {src("L", {-0.3, 0.0}, {-0.3, 0.0}, sd, 150.0),
                                   src("R", {0.3, 0.0}, {0.3, 0.0}, sd, 150.0),
                                   src("N", {7.0, 0.0}, {7.0, 0.0}, sd, 700.0)}});
  s.epochs.push_back({13.0, 14.5, {src("N", {7.0, 0.0}, {7.0, 0.0}, sd, 1000.0)}});
  // The newcomer splits.
  s.epochs.push_back({14.5, 20.0, {src("N1", {7.0, 0.0}, {7.0, 4.5}, sd, 500.0),
                                   src("N2", {7.0, 0.0}, {7.0, -4.5}, sd, 500.0)}});
  return s;
}

PlantedScenario hds_scenario() {
  PlantedScenario s;
  s.name = "hds";
  s.dim = 10;
  s.v = 1000.0;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  std::vector<Source> sources;
  for (int k = 0; k < 5; ++k) {
    std::vector<double> c(s.dim);
    for (auto& x : c) x = u(rng);
    sources.push_back(src("S" + std::to_string(k), c, c, 0.6, 200.0));
  }
  s.epochs.push_back({0.0, 20.0, std::move(sources)});
  return s;
}

PlantedScenario builtin_scenario(const std::string& name) {
  if (name == "sds") return sds_scenario();
  if (name == "hds") return hds_scenario();
  throw ScenarioError("unknown scenario: " + name);
}

std::vector<std::string> builtin_scenarios() { return {"sds", "hds"}; }

StreamData generate(const PlantedScenario& scenario, std::uint64_t seed) {
  scenario.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  StreamData out;
  out.dim = scenario.dim;
  out.has_labels = true;
  const auto total = static_cast<std::uint64_t>(std::llround(scenario.duration() * scenario.v));
  out.points.reserve(total);
  std::size_t e = 0;
  for (std::uint64_t k = 0; k < total; ++k) {
    const Timestamp t = static_cast<double>(k) / scenario.v;
    while (t >= scenario.epochs[e].end && e + 1 < scenario.epochs.size()) ++e;
    const Epoch& epoch = scenario.epochs[e];
    double x = pick(rng) * scenario.v;
    const Source* s = &epoch.sources.back();
    for (const auto& cand : epoch.sources) {
      if (x < cand.rate) {
        s = &cand;
        break;
      }
      x -= cand.rate;
    }
    const double f = (t - epoch.start) / (epoch.end - epoch.start);
    StreamPoint p;
    p.t = t;
    p.coords.resize(scenario.dim);
    for (std::size_t i = 0; i < scenario.dim; ++i) {
      p.coords[i] = s->from[i] + f * (s->to[i] - s->from[i]) + s->stddev * noise(rng);
    }
    p.label = s->label;
    out.points.push_back(std::move(p));
  }
  return out;
}

}  // namespace dpstream
