#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trees {

// One acceptance criterion run end to end at its stated tolerance.
struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

const std::vector<std::string>& verify_suite_names();

// Throws std::invalid_argument for an unknown name. `threads` bounds internal
// parallelism of the survey-based suites without affecting any verdict.
SuiteResult run_verify_suite(const std::string& name, int threads = 1);

// Runs the named suites (all twelve when `names` is empty), prints one
// PASS/FAIL line each, and returns the number of failures.
int run_verify(const std::vector<std::string>& names, int threads, std::ostream& out);

}  // namespace trees
