#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmflab/ntcore.hpp"

namespace rmflab::harness {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  double max_ratio = 0.0;  // largest lhs / rhs seen; 0 for pure identity checks
  std::string detail;      // first failing case, if any
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

using TauFunction = std::function<std::uint64_t(std::uint64_t, std::uint32_t, const ntcore::PrimeTable&)>;

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  unsigned threads = 0;
  // Monte Carlo trial counts; the acceptance suite raises these.
  std::uint64_t moment_trials = 2000;
  std::uint64_t orthogonality_trials = 20000;
  // Function under test for the divisor check; replaced in fault-injection tests.
  TauFunction tau = [](std::uint64_t n, std::uint32_t k, const ntcore::PrimeTable& t) {
    return ntcore::tau_k(n, k, t);
  };
};

// Runs every bound sweep and module invariant.
VerifyReport run_verify(const VerifyOptions& options = {});

void write_verify_json(std::ostream& out, const VerifyReport& report);

}  // namespace rmflab::harness
