#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace simcorr::testing {

struct PropertyOutcome {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool passed() const { return cases > 0 && failures == 0; }
};

/// Randomized invariant checks over the core API; every property runs `cases` draws.
std::vector<PropertyOutcome> run_invariant_suite(std::uint64_t seed, std::size_t cases);

}  // namespace simcorr::testing
