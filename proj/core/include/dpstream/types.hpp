#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dpstream {

// Seconds since the stream epoch.
using Timestamp = double;

// Cells are numbered by the sequence number of the point that seeded them,
// so the same input always yields the same ids.
using CellId = std::uint64_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct StreamPoint {
  std::vector<double> coords;
  Timestamp t = 0.0;
  std::optional<std::string> label;  // evaluation only
};

}  // namespace dpstream
