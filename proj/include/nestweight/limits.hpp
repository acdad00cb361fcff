#pragma once

#include <cstdint>

namespace nestweight {

// Bounds for exhaustive procedures. Every enumerating operation checks one of
// these and throws GuardError instead of running away.
struct Limits {
  int max_nesting_length = 14;     // enumerate_nestings
  int max_text_length = 9;         // enumerate_texts, enumerate_tdo
  int max_run_length = 6;          // wpa_runs (text length)
  std::uint64_t max_runs = 4000000;  // behavior_bruteforce, wpa_runs
  int max_set_domain = 12;         // second-order quantification
  int max_words = 200000;          // bounded checks over nested words
  int max_unfold_rounds = 64;
  std::uint64_t max_trees = 2000000;

  // Defaults multiplied by NESTWEIGHT_GUARD_SCALE when set.
  static Limits from_env();
  Limits scaled(double factor) const;
};

}  // namespace nestweight
