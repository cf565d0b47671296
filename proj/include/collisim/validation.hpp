#pragma once

#include <string>
#include <vector>

namespace collisim {

// One validation check: closed-form comparisons against the reference
// formulas plus the randomized brute-force equivalence audits.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // worst deviation / threshold summary
};

// Registered check names, in report order.
std::vector<std::string> validation_check_names();

// Run one check by name.
CheckResult run_validation_check(const std::string& name);

// Selector: "all", a check name, or an example alias ("example1".."example6").
std::vector<CheckResult> run_validation(const std::string& selector);

// Render a machine-readable JSON report.
std::string validation_report_json(const std::vector<CheckResult>& results);

}  // namespace collisim
