#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dpstream/engine.hpp"
#include "dpstream/scenario.hpp"

namespace {

using namespace dpstream;

EngineConfig sds_config(FilterMode filters, SeedIndex index) {
  EngineConfig c;
  c.decay = DecayParams{0.998, 1000.0, 1000.0, 0.0043};
  c.r = 0.3;
  c.tau0 = 5.0;
  c.sweep_interval = 100;
  c.recycle = false;
  c.filters = filters;
  c.index = index;
  return c;
}

const std::vector<StreamPoint>& sds_stream() {
  static const std::vector<StreamPoint> pts = generate(sds_scenario(), 7).points;
  return pts;
}

const std::vector<StreamPoint>& hds_stream() {
  static const std::vector<StreamPoint> pts = generate(hds_scenario(), 7).points;
  return pts;
}

void run_stream(benchmark::State& state, const EngineConfig& config, const std::vector<StreamPoint>& pts,
                std::size_t dim) {
  constexpr std::size_t kInit = 1000;
  std::uint64_t evals = 0;
  for (auto _ : state) {
    state.PauseTiming();
    Engine e(config, dim);
    e.initialize(std::span<const StreamPoint>(pts).subspan(0, kInit));
    state.ResumeTiming();
    for (std::size_t i = kInit; i < pts.size(); ++i) e.process_point(pts[i]);
    evals = e.counters().distance_evaluations();
  }
  const auto n = static_cast<std::int64_t>(pts.size() - kInit);
  state.SetItemsProcessed(state.iterations() * n);
  state.counters["distance_evals"] = static_cast<double>(evals);
}

void BM_SdsIngest(benchmark::State& state) {
  const auto filters = static_cast<FilterMode>(state.range(0));
  const auto index = static_cast<SeedIndex>(state.range(1));
  run_stream(state, sds_config(filters, index), sds_stream(), 2);
}
BENCHMARK(BM_SdsIngest)
    ->ArgNames({"filters", "grid"})
    ->Args({static_cast<int>(FilterMode::Both), static_cast<int>(SeedIndex::LinearScan)})
    ->Args({static_cast<int>(FilterMode::DensityOnly), static_cast<int>(SeedIndex::LinearScan)})
    ->Args({static_cast<int>(FilterMode::Off), static_cast<int>(SeedIndex::LinearScan)})
    ->Args({static_cast<int>(FilterMode::Both), static_cast<int>(SeedIndex::UniformGrid)})
    ->Unit(benchmark::kMillisecond);

void BM_HdsIngest(benchmark::State& state) {
  auto c = sds_config(static_cast<FilterMode>(state.range(0)), SeedIndex::LinearScan);
  c.r = 2.5;
  run_stream(state, c, hds_stream(), 10);
}
BENCHMARK(BM_HdsIngest)
    ->ArgName("filters")
    ->Arg(static_cast<int>(FilterMode::Both))
    ->Arg(static_cast<int>(FilterMode::Off))
    ->Unit(benchmark::kMillisecond);

// Many small cells: a wide uniform stream with a slow decay keeps hundreds
// of cells alive, where the tree filters matter most.
void BM_ManyCells(benchmark::State& state) {
  static const std::vector<StreamPoint> pts = [] {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<StreamPoint> out;
    for (int k = 0; k < 30000; ++k) {
      const double cx = (k % 4) * 6.0;
      out.push_back(StreamPoint{{cx + g(rng), g(rng)}, k / 1000.0, {}});
    }
    return out;
  }();
  EngineConfig c;
  c.decay = DecayParams{0.998, 50.0, 1000.0, 0.0002};
  c.r = 0.2;
  c.tau0 = 3.0;
  c.alpha_override = 0.5;
  c.recycle = true;
  c.filters = static_cast<FilterMode>(state.range(0));
  run_stream(state, c, pts, 2);
}
BENCHMARK(BM_ManyCells)
    ->ArgName("filters")
    ->Arg(static_cast<int>(FilterMode::Both))
    ->Arg(static_cast<int>(FilterMode::Off))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
