#include <iostream>
#include <string>

#include "swt/acceptance.hpp"

// Prints one line per acceptance criterion; exits nonzero if a gating criterion fails.
// Optional arguments select criteria by number.
int main(int argc, char** argv) {
  swt::AcceptanceOptions opts;
  opts.work_dir = "acceptance_out";
  for (int i = 1; i < argc; ++i) opts.only.push_back(std::stoi(argv[i]));
  const auto results = swt::run_acceptance(opts, &std::cout);
  const bool ok = swt::all_gating_passed(results);
  std::cout << (ok ? "acceptance: all gating criteria passed" : "acceptance: FAILED") << std::endl;
  return ok ? 0 : 1;
}
