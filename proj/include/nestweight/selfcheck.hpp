#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nestweight/limits.hpp"

namespace nestweight {

struct SelfcheckOptions {
  std::uint64_t seed = 1;
  int max_len = 4;     // longest word tried
  int max_states = 2;  // states of random automata (per sort for texts)
  int instances = 5;   // random instances per suite and semiring
};

struct SuiteResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  std::string first_failure;  // empty when everything passed
};

// Randomized invariant suites; the same options give the same results.
std::vector<SuiteResult> run_selfcheck(const SelfcheckOptions& opt, const Limits& limits = Limits{});

}  // namespace nestweight
