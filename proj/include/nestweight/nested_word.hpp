#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "nestweight/limits.hpp"

namespace nestweight {

using Symbol = std::string;
using Word = std::vector<Symbol>;

// Splits a word given as text: whitespace-separated tokens if any whitespace
// occurs, otherwise one symbol per character.
Word split_word(std::string_view text);
std::string join_word(const Word& w);

struct Arc {
  int call = 0;
  int ret = 0;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

enum class PositionKind { internal, call, ret };

class NestedWord {
 public:
  NestedWord() = default;
  // Validates the nesting relation; positions are 1-indexed.
  NestedWord(Word letters, std::vector<Arc> arcs);

  int size() const { return static_cast<int>(letters_.size()); }
  const Word& letters() const { return letters_; }
  const Symbol& letter(int i) const { return letters_[i - 1]; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  PositionKind kind(int i) const;
  // Matching position of a call or return, 0 for internal positions.
  int partner(int i) const { return partner_[i]; }
  bool is_arc(int i, int j) const { return i >= 1 && i <= size() && partner_[i] == j && i < j; }
  // Number of arcs (k,l) with k <= i < l, i.e. calls opened and not closed,
  // counting position i itself when it is a call.
  int depth(int i) const;
  int depth() const;

  // Restriction to positions i..j, shifted to start at 1; keeps arcs with both
  // endpoints inside the window.
  NestedWord factor(int i, int j) const;
  // Arcs not enclosed by any other arc.
  std::vector<Arc> surface_arches() const;

  friend bool operator==(const NestedWord& a, const NestedWord& b) {
    return a.letters_ == b.letters_ && a.arcs_ == b.arcs_;
  }
  friend bool operator<(const NestedWord& a, const NestedWord& b);

 private:
  Word letters_;
  std::vector<Arc> arcs_;
  std::vector<int> partner_;
};

// All nesting relations on positions 1..n (Motzkin many), in a fixed order.
std::vector<std::vector<Arc>> enumerate_nestings(int n, const Limits& limits = Limits{});
// All nested words of length n over the alphabet, ordered by letters then arcs.
std::vector<NestedWord> enumerate_nested_words(const std::vector<Symbol>& alphabet, int n,
                                               const Limits& limits = Limits{});
// All words of length n over the alphabet in lexicographic order.
std::vector<Word> enumerate_words(const std::vector<Symbol>& alphabet, int n, std::size_t max_count);

}  // namespace nestweight
