#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace l2cut {

// Randomized invariant suites: every identity, sandwich and bracket the
// library is built on, run against seeded random instances with the
// brute-force oracles. Each suite reports its case count, failure count and
// the worst observed residual together with the instance seed that produced
// it, so a red run is reproducible.
struct SuiteCounts {
  int measures = 1000;     // random step measures
  int chains = 500;        // random reversible chains (split across kinds)
  int kernels = 50;        // random kernels for the lazy/continuized maps
  int products = 200;      // random product specs vs the tensor oracle
  int brackets = 200;      // factor-vs-tensor gap brackets
  int comparisons = 50;    // lazy-vs-continuized comparisons
};

struct SuiteResult {
  std::string name;
  long long cases = 0;
  long long failures = 0;
  double worst = 0.0;           // worst residual or margin, suite-specific
  std::uint64_t worst_seed = 0; // instance seed behind the worst case
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool ok = true;
  long long total_cases = 0;
};

VerifyReport run_property_suite(std::uint64_t seed,
                                const SuiteCounts& counts = {});

}  // namespace l2cut
