#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "dpstream/cellspace.hpp"
#include "dpstream/decay.hpp"
#include "dpstream/dptree.hpp"
#include "dpstream/tauctl.hpp"

namespace dpstream {

struct EngineConfig {
  DecayParams decay;
  double r = 0.3;
  double tau0 = 5.0;
  std::optional<double> alpha_override;
  std::size_t init_cell_count = 10;
  std::size_t sweep_interval = 1000;
  bool recycle = true;
  FilterMode filters = FilterMode::Both;
  std::uint64_t seed = 0;

  // Not part of the file format; set programmatically or from the CLI.
  OrderPolicy order = OrderPolicy::Reject;
  SeedIndex index = SeedIndex::LinearScan;
  TieBreak ties = TieBreak::SmallestId;
  ObjectiveForm objective = ObjectiveForm::Reciprocal;

  // Throws ParameterError.
  void validate() const;
  // Stable digest of every field that affects results.
  std::uint64_t fingerprint() const;
};

std::string_view to_string(FilterMode mode);
FilterMode parse_filter_mode(std::string_view text);
std::string_view to_string(ObjectiveForm form);
ObjectiveForm parse_objective_form(std::string_view text);

// Flat key=value text. '#' starts a comment. Unset keys keep their defaults.
// Syntax errors throw ParseError; unknown keys and bad values throw
// ParameterError.
EngineConfig parse_config(std::istream& in);
EngineConfig parse_config(std::string_view text);
EngineConfig load_config(const std::string& path);

// Writes every key; parse_config reads it back to an equal config.
std::string format_config(const EngineConfig& config);

}  // namespace dpstream
