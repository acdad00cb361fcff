#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nestweight/formula.hpp"
#include "nestweight/logic.hpp"
#include "nestweight/nested_word.hpp"
#include "nestweight/semiring.hpp"
#include "nestweight/text.hpp"
#include "nestweight/wnwa.hpp"
#include "nestweight/wpa.hpp"

namespace nestweight {

using Rng = std::mt19937_64;

// A random nonzero carrier element with small numerator and denominator.
Weight random_weight(Rng& rng, const Semiring& k);

struct RandomWnwaOptions {
  int states = 2;
  std::vector<Symbol> alphabet = {"a", "b"};
  double density = 0.4;  // probability that an entry is nonzero
};
Wnwa random_wnwa(Rng& rng, const Semiring& k, const RandomWnwaOptions& opt = {});

NestedWord random_nested_word(Rng& rng, const std::vector<Symbol>& alphabet, int n);

struct RandomWpaOptions {
  int hstates = 2;
  int vstates = 2;
  int parens = 2;
  std::vector<Symbol> alphabet = {"a", "b"};
  double density = 0.5;
};
Wpa random_wpa(Rng& rng, const Semiring& k, const RandomWpaOptions& opt = {});

// Uniform over alternating texts of length n with random labels.
Text random_text(Rng& rng, const std::vector<Symbol>& alphabet, int n);

// Constant-free formula over x, y, z, X and the given labels.
Formula random_classical_formula(Rng& rng, int depth, const std::vector<Symbol>& labels = {"a", "b"});
// Values for x, y, z and X over positions 1..n.
Assignment random_assignment(Rng& rng, int n);

}  // namespace nestweight
