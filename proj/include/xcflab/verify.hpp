#pragma once

// Verification suites. Every check carries the measured value, its acceptance
// band and the numbered acceptance criterion it belongs to (0 for module
// invariants outside the numbered list).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace xcf {

struct Check {
  std::string name;
  int criterion = 0;
  double measured = 0.0;
  std::optional<double> lo, hi;
  bool strict_lo = false;  // measured > lo instead of >=
  bool pass = false;
  double seconds = 0.0;    // wall time of the computation behind the check; not reported
};

struct VerifyOptions {
  double tol_scale = 1.0;
  std::uint64_t seed = 0;
};

/// algebraic, convergence, monotonicity, embedding, symbol, all.
const std::vector<std::string>& suite_names();

/// Throws ConfigError for an unknown suite or a non-positive tol_scale.
std::vector<Check> run_suite(const std::string& suite, const VerifyOptions& opt);

nlohmann::json verify_report(const std::string& suite, const VerifyOptions& opt,
                             const std::vector<Check>& checks);

bool all_pass(const std::vector<Check>& checks);

}  // namespace xcf
