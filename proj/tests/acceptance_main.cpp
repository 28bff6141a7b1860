// Acceptance suite: one pass/fail line per criterion. Criteria 1-10 run the
// library verification suites at their pinned tolerances; criterion 11 runs
// the CLI twice and compares report bytes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ncwass/verify.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

bool run_cli_determinism(std::string& detail) {
#ifndef NCWASS_CLI_PATH
  detail = "CLI path not configured";
  return false;
#else
  const std::string cli = NCWASS_CLI_PATH;
  const std::string out1 = "acceptance_verify_run1.json";
  const std::string out2 = "acceptance_verify_run2.json";
  std::string cmd1 = cli + " verify --suite all --seed 0 --output " + out1 +
                     " > /dev/null 2> /dev/null";
  std::string cmd2 = cli + " verify --suite all --seed 0 --output " + out2 +
                     " > /dev/null 2> /dev/null";
  int rc1 = std::system(cmd1.c_str());
  int rc2 = std::system(cmd2.c_str());
  if (rc1 != 0 || rc2 != 0) {
    detail = "verify exited nonzero";
    return false;
  }
  std::string a = read_file(out1);
  std::string b = read_file(out2);
  std::remove(out1.c_str());
  std::remove(out2.c_str());
  if (a.empty() || a != b) {
    detail = "reports differ between runs";
    return false;
  }
  detail = "byte-identical reports (" + std::to_string(a.size()) + " bytes)";
  return true;
#endif
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  const uint64_t seed = 0;
  int failures = 0;
  int index = 0;

  auto report_line = [&](const std::string& name, bool pass,
                         const std::string& detail, double ms) {
    ++index;
    std::printf("criterion %02d %-28s %s  (%.0f ms%s%s)\n", index, name.c_str(),
                pass ? "PASS" : "FAIL", ms, detail.empty() ? "" : "; ",
                detail.c_str());
    if (!pass) ++failures;
  };

  for (const std::string& name : ncwass::verify_suite_names()) {
    auto t0 = Clock::now();
    std::vector<ncwass::SuiteResult> results;
    bool pass = false;
    std::string detail;
    try {
      results = ncwass::run_verify_suites(name, seed);
      pass = results.size() == 1 && results[0].pass;
      if (!pass && !results.empty()) detail = results[0].details.dump();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    report_line(name, pass, detail, ms);
  }

  {
    auto t0 = Clock::now();
    std::string detail;
    bool pass = run_cli_determinism(detail);
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    report_line("verify_determinism", pass, detail, ms);
  }

  if (failures == 0) {
    std::printf("acceptance: all %d criteria passed\n", index);
  } else {
    std::printf("acceptance: %d of %d criteria FAILED\n", failures, index);
  }
  return failures;
}
