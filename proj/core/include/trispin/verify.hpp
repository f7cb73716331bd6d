#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace trispin {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationOptions {
  std::uint64_t seed = 20250808;
  // Test hook: corrupts the sign of one Delta_K coupling inside the
  // reference block formula, which must make the construction oracle fail.
  // (A consistent global Delta_K flip is a basis sign change and would be
  // absorbed by the oracle's sign-freedom handling.)
  bool inject_delta_k_sign_error = false;
};

/// Self-contained oracle suite: closed-form m=3/2 block reproduction,
/// two-level reductions, resonance-table dynamics, analytic Rabi
/// equivalence, and the s23 = 1/2 switching bound.
std::vector<CheckResult> run_verification(const VerificationOptions& options = {});

}  // namespace trispin
