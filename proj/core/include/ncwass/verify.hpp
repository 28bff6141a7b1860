#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncwass/serialize.hpp"

namespace ncwass {

struct SuiteResult {
  std::string name;
  bool pass = false;
  Json details;
};

const std::vector<std::string>& verify_suite_names();

// which = "all" or a single suite name. Deterministic in the seed.
std::vector<SuiteResult> run_verify_suites(const std::string& which, uint64_t seed);

Json verify_report(const std::vector<SuiteResult>& results, uint64_t seed);

}  // namespace ncwass
