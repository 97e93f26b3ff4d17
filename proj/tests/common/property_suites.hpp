#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dpstream::testing {

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;  // empty when all passed
  bool ok() const { return failures == 0 && cases > 0; }
};

// A case returns an empty string on success, a description otherwise.
using PropertyCase = std::function<std::string(std::uint64_t seed)>;

SuiteResult run_suite(const std::string& name, const PropertyCase& check, int cases,
                      std::uint64_t base_seed);

std::string delta_monotonicity_case(std::uint64_t seed);
std::string nearest_denser_case(std::uint64_t seed);
std::string state_machine_case(std::uint64_t seed);
std::string diff_count_case(std::uint64_t seed);
std::string objective_scale_case(std::uint64_t seed);

// All five suites, `cases` each.
std::vector<SuiteResult> run_all_suites(int cases = 1000);

}  // namespace dpstream::testing
