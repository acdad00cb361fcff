#pragma once

#include <optional>

#include "nestweight/nested_word.hpp"
#include "nestweight/text.hpp"
#include "nestweight/wnwa.hpp"
#include "nestweight/wpa.hpp"

namespace nestweight {

// Encodes a nested word as an alternating text. With Sort::horizontal the
// top level is a horizontal product and each arc becomes a factor of the
// opposite sort; Sort::vertical is the dual encoding.
Text phi(const NestedWord& nw, Sort top);
inline Text phi_circ(const NestedWord& nw) { return phi(nw, Sort::horizontal); }
inline Text phi_bullet(const NestedWord& nw) { return phi(nw, Sort::vertical); }

// The second-order comparison of the horizontal encoding computed directly
// from the nesting: for i < j, whether i comes after j in the second order.
bool phi_circ_reverses(const NestedWord& nw, int i, int j);

// Recovers the nested word whose encoding is t, or nullopt when t is not in
// the image. Arcs are read off the prime clans.
std::optional<NestedWord> phi_inverse(const Text& t, Sort top);

// Automaton over nested words whose behavior is the text series of the
// parenthesizing automaton pulled back along the horizontal encoding.
Wnwa wpa_to_wnwa(const Wpa& pa);
// Parenthesizing automaton whose behavior on the encoding (of the chosen
// sort) of nw is the behavior of the automaton on nw.
Wpa wnwa_to_wpa(const Wnwa& a, Sort top = Sort::horizontal);

}  // namespace nestweight
