#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "swt/grid.hpp"

namespace swt {

struct NamedFunction {
  std::string name;
  std::function<cplx(double)> f;
};

/// Smooth, rapidly decaying test signals with moderate bandwidth (|nu| < 6).
std::vector<NamedFunction> standard_test_functions();

struct CheckResult {
  std::string id;
  std::string title;
  bool passed = false;
  /// Soft checks are reported but never fail the run.
  bool gating = true;
  std::string detail;
  double seconds = 0.0;
};

/// "[PASS] 6 case study free: ... (2.7 s)".
std::string format_result(const CheckResult& r);

struct AcceptanceOptions {
  /// Case-study output goes below this directory.
  std::filesystem::path work_dir = "acceptance_out";
  /// Criterion numbers to run; empty runs 1 to 12.
  std::vector<int> only;
};

/// Numbered acceptance criteria 1 to 12; criterion 12 is soft.  Each result is printed to
/// `log` (if given) as soon as it is known.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opts, std::ostream* log);

/// Acceptance criteria plus the negative control with the wrong Fourier sign and the
/// spectrogram nonnegativity check.
std::vector<CheckResult> run_verification(const AcceptanceOptions& opts, std::ostream* log);

/// True when every gating check passed.
bool all_gating_passed(const std::vector<CheckResult>& results);

}  // namespace swt
