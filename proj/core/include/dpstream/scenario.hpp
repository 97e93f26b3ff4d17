#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpstream/stream_io.hpp"

namespace dpstream {

// A Gaussian source whose centre moves linearly across its epoch.
struct Source {
  std::string label;
  std::vector<double> from;
  std::vector<double> to;
  double stddev = 1.0;
  double rate = 0.0;  // points per second
};

struct Epoch {
  Timestamp start = 0.0;
  Timestamp end = 0.0;
  std::vector<Source> sources;
};

struct PlantedScenario {
  std::string name;
  std::size_t dim = 2;
  double v = 1000.0;
  std::vector<Epoch> epochs;  // contiguous, starting at 0

  // Throws ScenarioError: rates must sum to v in every epoch, epochs must be
  // contiguous and non-empty, and every centre must have `dim` coordinates.
  void validate() const;
  Timestamp duration() const { return epochs.empty() ? 0.0 : epochs.back().end; }
};

// Two clusters approach and merge, a new one emerges while the merged one
// fades out, and the newcomer splits in two. 20 s at 1000 points/s.
PlantedScenario sds_scenario();
// Static mixture of Gaussians in 10 dimensions.
PlantedScenario hds_scenario();
// Throws ScenarioError for unknown names.
PlantedScenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenarios();

// Point k arrives at k / v. Deterministic for a given seed.
StreamData generate(const PlantedScenario& scenario, std::uint64_t seed);

}  // namespace dpstream
