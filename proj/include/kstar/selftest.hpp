#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kstar/kstar_data.hpp"

namespace kstar {

struct SelftestSummary {
  int instances{0};
  std::map<std::string, int> passed;   // check name -> times verified
  std::map<std::string, int> skipped;  // check name -> times not applicable
  std::vector<std::string> failures;   // human-readable failure records

  bool ok() const { return failures.empty(); }
};

// Cross-module property suite over `count` seeded random instances plus the
// built-in deterministic fixtures. Pure; deterministic for fixed arguments.
SelftestSummary run_property_suite(std::uint64_t seed, int count,
                                   const RandomBounds& bounds, bool verbose);

}  // namespace kstar
