#pragma once

#include <span>
#include <vector>

#include "dpstream/config.hpp"
#include "dpstream/engine.hpp"
#include "dpstream/scenario.hpp"

namespace dpstream::testing {

// Mirrors configs/sds.conf.
inline EngineConfig sds_preset() {
  EngineConfig c;
  c.decay = DecayParams{0.998, 1000.0, 1000.0, 0.0043};
  c.r = 0.3;
  c.tau0 = 5.0;
  c.init_cell_count = 10;
  c.sweep_interval = 100;
  c.recycle = false;
  c.seed = 7;
  return c;
}

// Mirrors configs/reference.conf.
inline EngineConfig reference_config() {
  EngineConfig c;
  c.decay = DecayParams{0.998, 1.0, 1000.0, 0.0021};
  c.r = 1.5;
  c.tau0 = 5.0;
  c.alpha_override = 0.5;
  c.init_cell_count = 2;
  c.sweep_interval = 100;
  c.recycle = true;
  c.seed = 7;
  return c;
}

inline std::vector<StreamPoint> sds_points(std::uint64_t seed = 7) {
  return generate(sds_scenario(), seed).points;
}

// Initializes on the first `init` points; returns the index of the first
// point left for process_point.
inline std::size_t start(Engine& engine, std::span<const StreamPoint> points, std::size_t init) {
  engine.initialize(points.subspan(0, init));
  return init;
}

}  // namespace dpstream::testing
