#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nestweight/logic.hpp"

namespace nestweight {

// A one-copying definition scheme. The domain formula and the label
// formulas have the free first-order variable x, the two binary relation
// formulas have x and y; all may use the set parameters.
struct DefinitionScheme {
  Signature source = Signature::nested;
  Signature target = Signature::nested;
  std::vector<std::string> parameters;
  Formula theta;
  Formula delta;
  std::map<Symbol, Formula> labels;
  Formula order;
  Formula edge;
};

// Throws InputError when a component has unexpected free variables.
void validate_scheme(const DefinitionScheme& d);

// The output structure, or nullopt when theta fails for these parameters.
// A scheme that defines no linear order, no unique labelling or no valid
// target structure is an input error.
std::optional<Structure> deftrans_apply(const DefinitionScheme& d, const Structure& s,
                                        const std::vector<std::set<int>>& params, const Limits& limits = Limits{});

// Every parameter tuple for which theta holds.
std::vector<std::vector<std::set<int>>> satisfying_parameters(const DefinitionScheme& d, const Structure& s,
                                                              const Limits& limits = Limits{});

DefinitionScheme identity_scheme(Signature sig, const std::vector<Symbol>& alphabet);
// Nested words to texts by the even/odd depth rule, parameters X1 X2 Y1 Y2
// for the calls of odd and even depth and their returns.
DefinitionScheme phi_circ_scheme(const std::vector<Symbol>& alphabet);
// The circ order relation as a formula in x, y and the parameter X1.
Formula phi_circ_relation(const std::string& x, const std::string& y, const std::string& X1);

// The formula over the source signature whose semantics is that of f over
// the image structure, without (translate_body) and with the parameter
// prefix and theta.
Formula translate_body(const DefinitionScheme& d, const Formula& f);
Formula translate_formula(const DefinitionScheme& d, const Formula& f);

}  // namespace nestweight
