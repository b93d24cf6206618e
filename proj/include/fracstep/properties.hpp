#pragma once

#include <string>
#include <vector>

namespace fracstep {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs every library invariant check; deterministic (fixed seeds).
std::vector<PropertyResult> run_property_suite();

/// Least-squares slope of log|y| against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fracstep
