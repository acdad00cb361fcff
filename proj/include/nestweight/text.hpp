#pragma once

#include <optional>
#include <vector>

#include "nestweight/limits.hpp"
#include "nestweight/nested_word.hpp"

namespace nestweight {

enum class Sort { horizontal, vertical };

inline Sort opposite(Sort s) { return s == Sort::horizontal ? Sort::vertical : Sort::horizontal; }

// A labelled structure with the positional order 1..n and a second linear
// order given as the list of positions in ascending order. Construction
// checks that the second order is a permutation and that the text is
// alternating (decomposes into singletons by the two products).
class Text {
 public:
  Text() = default;
  Text(Word labels, std::vector<int> order2);
  static Text singleton(const Symbol& a) { return Text({a}, {1}); }

  int size() const { return static_cast<int>(labels_.size()); }
  const Word& labels() const { return labels_; }
  const Symbol& label(int i) const { return labels_[i - 1]; }
  const std::vector<int>& order2() const { return order2_; }
  // 0-based rank of position i in the second order.
  int rank2(int i) const { return rank2_[i]; }
  bool leq2(int i, int j) const { return rank2_[i] <= rank2_[j]; }
  Text factor(int i, int j) const;

  friend bool operator==(const Text& a, const Text& b) { return a.labels_ == b.labels_ && a.order2_ == b.order2_; }
  friend bool operator<(const Text& a, const Text& b) {
    if (a.labels_ != b.labels_) return a.labels_ < b.labels_;
    return a.order2_ < b.order2_;
  }

 private:
  Word labels_;
  std::vector<int> order2_;
  std::vector<int> rank2_;  // indexed by position, slot 0 unused
};

// Horizontal composition appends factor blocks to the second order left to
// right, vertical composition right to left. Requires at least one factor.
Text compose(Sort sort, const std::vector<Text>& factors);

struct Interval {
  int lo = 0;
  int hi = 0;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

// Maximal decomposition. A singleton has no sort; otherwise the text is the
// sort-product of at least two factors, none of which is itself a product
// of the same sort.
struct Decomposition {
  bool singleton = false;
  Sort sort = Sort::horizontal;
  std::vector<Interval> blocks;
};
Decomposition decompose(const Text& t);

// True when the permutation (positions in second-order ascending order)
// describes an alternating text. Throws if it is not a permutation of 1..n.
bool is_alternating(const std::vector<int>& order2);

// Intervals of the first order that are also intervals of the second.
std::vector<Interval> clans(const Text& t);
// Clans overlapping no other clan.
std::vector<Interval> prime_clans(const Text& t);

// Second orders of all alternating texts on n positions, sorted.
std::vector<std::vector<int>> enumerate_tdo(int n, const Limits& limits = Limits{});
// All alternating texts with the given labels.
std::vector<Text> enumerate_texts(const Word& labels, const Limits& limits = Limits{});

}  // namespace nestweight
