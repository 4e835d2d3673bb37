#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace symart {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

enum class VerifySuite { Euclid, Hyperbolic, All };

/// Runs the built-in symmetry and geometry checks. Every check uses
/// generators seeded from `seed`, so results are reproducible.
std::vector<CheckResult> run_verify_suite(VerifySuite suite, std::uint64_t seed = 20240601);

}  // namespace symart
