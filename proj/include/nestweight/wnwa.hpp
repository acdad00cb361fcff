#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "nestweight/limits.hpp"
#include "nestweight/nested_word.hpp"
#include "nestweight/semiring.hpp"

namespace nestweight {

// Weighted nested word automaton with sparse transition tables. States are
// addressed by index; names are kept for I/O.
class Wnwa {
 public:
  using IntKey = std::tuple<int, Symbol, int>;        // (p, a, q)
  using RetKey = std::tuple<int, int, Symbol, int>;   // (p, lookback, a, q)

  Wnwa() = default;
  Wnwa(Semiring semiring, std::vector<std::string> states);

  const Semiring& semiring() const { return semiring_; }
  int num_states() const { return static_cast<int>(states_.size()); }
  const std::vector<std::string>& states() const { return states_; }
  int state_index(const std::string& name) const;
  int add_state(const std::string& name);

  // Symbols mentioned by any transition or declared explicitly, sorted.
  std::vector<Symbol> alphabet() const;
  void declare_symbol(const Symbol& a) { declared_.push_back(a); }

  // The add_* methods accumulate with the semiring sum; zero results are dropped.
  void add_initial(int q, const Weight& w);
  void add_final(int q, const Weight& w);
  void add_internal(int p, const Symbol& a, int q, const Weight& w);
  void add_call(int p, const Symbol& a, int q, const Weight& w);
  void add_return(int p, int lookback, const Symbol& a, int q, const Weight& w);

  Weight initial(int q) const;
  Weight final_weight(int q) const;
  Weight internal(int p, const Symbol& a, int q) const;
  Weight call(int p, const Symbol& a, int q) const;
  Weight ret(int p, int lookback, const Symbol& a, int q) const;

  const std::map<int, Weight>& initials() const { return iota_; }
  const std::map<int, Weight>& finals() const { return kappa_; }
  const std::map<IntKey, Weight>& internals() const { return int_; }
  const std::map<IntKey, Weight>& calls() const { return call_; }
  const std::map<RetKey, Weight>& returns() const { return ret_; }

 private:
  void check_state(int q) const;

  Semiring semiring_;
  std::vector<std::string> states_;
  std::unordered_map<std::string, int> index_;
  std::vector<Symbol> declared_;
  std::map<int, Weight> iota_, kappa_;
  std::map<IntKey, Weight> int_, call_;
  std::map<RetKey, Weight> ret_;
};

// Weight of one run q0..qn (n+1 states). A return at position l reads the
// state preceding its matching call.
Weight run_weight(const Wnwa& a, const NestedWord& nw, const std::vector<int>& run);

// Behavior by summing run_weight over every state sequence. Exponential.
Weight behavior_bruteforce(const Wnwa& a, const NestedWord& nw, const Limits& limits = Limits{});

// Behavior by dynamic programming over the arch structure. Reusable across
// words for one automaton.
class WnwaEvaluator {
 public:
  explicit WnwaEvaluator(const Wnwa& a);
  Weight operator()(const NestedWord& nw);

 private:
  using Entry = std::pair<int, Weight>;
  using Vec = std::vector<Entry>;

  Vec apply_segment(const Vec& v, int i, int j);
  const Vec& inner_row(int k, int state);
  int symbol(const Symbol& a) const;

  const Wnwa& a_;
  const Semiring& k_;
  int q_;
  std::unordered_map<Symbol, int> sym_;
  std::vector<std::vector<Vec>> int_out_, call_out_;
  std::vector<std::unordered_map<long long, Vec>> ret_out_;
  // Per evaluation.
  const NestedWord* nw_ = nullptr;
  std::vector<int> letter_ids_;
  std::map<std::pair<int, int>, Vec> rows_;
};

Weight behavior(const Wnwa& a, const NestedWord& nw);

Wnwa hadamard(const Wnwa& a, const Wnwa& b);
Wnwa disjoint_sum(const Wnwa& a, const Wnwa& b);
Wnwa scale(const Weight& k, const Wnwa& a);
// Drops states that cannot occur on a run of nonzero weight (over-approximate
// reachability in both directions).
Wnwa trim(const Wnwa& a);

// First nested word of length 1..max_len (by length, letters, arcs) on which
// the behaviors differ, if any.
std::optional<NestedWord> bounded_equiv(const Wnwa& a, const Wnwa& b, int max_len,
                                        const Limits& limits = Limits{});
std::optional<NestedWord> bounded_zero_test(const Wnwa& a, int max_len, const Limits& limits = Limits{});

}  // namespace nestweight
