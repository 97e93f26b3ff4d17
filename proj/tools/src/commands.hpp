#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace dpstream::cli {

// Settings that have no config-file key.
struct EngineFlags {
  std::string objective = "reciprocal";
  std::string root_delta = "max-distance";
  std::string index = "linear";
  std::string order = "reject";
  std::string ties = "smallest-id";
};

struct GenOptions {
  std::string scenario = "sds";
  std::uint64_t seed = 7;
  std::string out;  // empty: stdout
};

struct InitOptions {
  std::string input;
  std::string config;
  std::optional<double> tau0;
  std::string decision_graph;
  std::string state;
  std::size_t init_points = 1000;
  EngineFlags flags;
};

struct RunOptions {
  std::string input;
  std::string state;   // resume from `init`, or
  std::string config;  // initialise here from the first init_points rows
  std::optional<double> tau0;
  std::size_t init_points = 1000;
  std::string events;
  std::string snapshots;
  std::string counters;
  std::string save_state;
  EngineFlags flags;
};

struct EvalOptions {
  std::string snapshots;
  std::string input;
  std::string out;  // empty: stdout
};

void run_gen(const GenOptions& o);
void run_init(const InitOptions& o);
void run_run(const RunOptions& o);
void run_eval(const EvalOptions& o);

}  // namespace dpstream::cli
