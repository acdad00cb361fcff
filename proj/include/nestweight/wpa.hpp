#pragma once

#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "nestweight/limits.hpp"
#include "nestweight/semiring.hpp"
#include "nestweight/text.hpp"

namespace nestweight {

// Weighted parenthesizing automaton. Horizontal states occupy indices
// 0..|H|-1 and vertical states |H|..|H|+|V|-1.
class Wpa {
 public:
  using Key = std::tuple<int, Symbol, int>;  // (state, letter, state)
  using ParenKey = std::tuple<int, int, int>;  // (state, bracket, state)

  Wpa() = default;
  Wpa(Semiring semiring, std::vector<std::string> hstates, std::vector<std::string> vstates,
      std::vector<std::string> parens);

  const Semiring& semiring() const { return semiring_; }
  int num_h() const { return static_cast<int>(hstates_.size()); }
  int num_v() const { return static_cast<int>(vstates_.size()); }
  int num_states() const { return num_h() + num_v(); }
  int num_parens() const { return static_cast<int>(parens_.size()); }
  const std::vector<std::string>& hstates() const { return hstates_; }
  const std::vector<std::string>& vstates() const { return vstates_; }
  const std::vector<std::string>& parens() const { return parens_; }
  bool is_h(int q) const { return q < num_h(); }
  Sort sort_of(int q) const { return is_h(q) ? Sort::horizontal : Sort::vertical; }
  const std::string& state_name(int q) const { return is_h(q) ? hstates_[q] : vstates_[q - num_h()]; }
  int state_index(const std::string& name) const;
  int paren_index(const std::string& name) const;
  std::vector<int> states_of(Sort s) const;
  std::vector<Symbol> alphabet() const;
  void declare_symbol(const Symbol& a) { declared_.push_back(a); }

  // Both states of a transition must have the same sort; brackets connect
  // states of opposite sorts.
  void add_mu(int p, const Symbol& a, int q, const Weight& w);
  void add_open(int p, int s, int q, const Weight& w);
  void add_close(int p, int s, int q, const Weight& w);
  void add_lambda(int q, const Weight& w);
  void add_gamma(int q, const Weight& w);

  Weight mu(int p, const Symbol& a, int q) const;
  Weight open(int p, int s, int q) const;
  Weight close(int p, int s, int q) const;
  Weight lambda(int q) const;
  Weight gamma(int q) const;

  const std::map<Key, Weight>& mus() const { return mu_; }
  const std::map<ParenKey, Weight>& opens() const { return open_; }
  const std::map<ParenKey, Weight>& closes() const { return close_; }
  const std::map<int, Weight>& lambdas() const { return lambda_; }
  const std::map<int, Weight>& gammas() const { return gamma_; }

 private:
  void check_state(int q) const;
  void check_paren(int s) const;

  Semiring semiring_;
  std::vector<std::string> hstates_, vstates_, parens_;
  std::unordered_map<std::string, int> index_, paren_index_;
  std::vector<Symbol> declared_;
  std::map<Key, Weight> mu_;
  std::map<ParenKey, Weight> open_, close_;
  std::map<int, Weight> lambda_, gamma_;
};

struct WpaRun {
  std::string run;  // the run written as a word
  Weight weight;
  int initial = 0;
  int final = 0;
};

// Every run labelled by the text, from the inductive run definition.
std::vector<WpaRun> wpa_runs(const Wpa& a, const Text& t, const Limits& limits = Limits{});
// Behavior as the weighted sum over wpa_runs.
Weight wpa_behavior_runs(const Wpa& a, const Text& t, const Limits& limits = Limits{});
// Behavior by structural recursion on the maximal decomposition.
Weight wpa_behavior(const Wpa& a, const Text& t);

}  // namespace nestweight
