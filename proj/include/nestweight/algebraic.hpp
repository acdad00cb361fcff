#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nestweight/formula.hpp"
#include "nestweight/json_io.hpp"
#include "nestweight/limits.hpp"
#include "nestweight/semiring.hpp"
#include "nestweight/wnwa.hpp"
#include "nestweight/wpa.hpp"

namespace nestweight {

// A word over letters and variables; which is which is decided by the system.
using SysWord = std::vector<std::string>;
// Finite support, no zero coefficients stored.
using Polynomial = std::map<SysWord, Weight>;

class AlgebraicSystem {
 public:
  AlgebraicSystem() = default;
  AlgebraicSystem(Semiring semiring, std::vector<Symbol> alphabet, std::vector<std::string> variables);

  const Semiring& semiring() const { return semiring_; }
  const std::vector<Symbol>& alphabet() const { return alphabet_; }
  const std::vector<std::string>& variables() const { return variables_; }
  bool is_variable(const std::string& s) const { return var_set_.count(s) != 0; }
  bool is_letter(const std::string& s) const { return letter_set_.count(s) != 0; }

  void add_variable(const std::string& x);
  // Accumulates with the semiring sum and drops the entry when it becomes zero.
  void add(const std::string& x, const SysWord& w, const Weight& c);
  void set(const std::string& x, const SysWord& w, const Weight& c);
  const Polynomial& poly(const std::string& x) const;
  Polynomial& poly_mut(const std::string& x);
  Weight coeff(const std::string& x, const SysWord& w) const;

  bool is_terminal(const SysWord& w) const;
  int letter_count(const SysWord& w) const;
  // Throws InputError on unknown symbols or overlapping letter/variable names.
  void validate() const;

 private:
  Semiring semiring_;
  std::vector<Symbol> alphabet_;
  std::vector<std::string> variables_;
  std::set<std::string> var_set_, letter_set_;
  std::map<std::string, Polynomial> polys_;
};

struct SystemClass {
  bool proper = false;
  bool weakly_strict = false;
  bool gnf = false;
  bool sandwich_normal = false;
};
SystemClass check_class(const AlgebraicSystem& sys);

// Replaces the variable at index `position` of the support word w of P_X by
// P_Y for the variable Y found there.
AlgebraicSystem substitute(const AlgebraicSystem& sys, const std::string& x, const SysWord& w, int position);
// Equivalent weakly strict system in which every non-terminal support word
// carries at least k letters.
AlgebraicSystem unfold(const AlgebraicSystem& sys, int k, const Limits& limits = Limits{});
// Weakly strict system whose solution is the old one restricted to words
// longer than k. The result is proper.
AlgebraicSystem strip_short_words(const AlgebraicSystem& sys, int k, const Limits& limits = Limits{});

// Coefficients of the unique solution (quasiregular for proper systems).
// Refuses systems that are neither proper nor weakly strict.
class SystemSolver {
 public:
  explicit SystemSolver(const AlgebraicSystem& sys);
  // (S_X, w) for every variable X.
  std::map<std::string, Weight> solve(const Word& w);
  Weight coefficient(const std::string& x, const Word& w);

 private:
  const AlgebraicSystem& sys_;
  std::map<std::string, int> var_index_;
};

Weight coefficient(const AlgebraicSystem& sys, const std::string& x, const Word& w);
// Nonzero coefficients of S_X for all words of length 0..max_len.
std::map<Word, Weight> solve_coefficients(const AlgebraicSystem& sys, const std::string& x, int max_len,
                                          const Limits& limits = Limits{});

// Inner nodes carry (variable, support word); leaves carry one letter.
struct DerivationTree {
  std::string variable;  // empty for a leaf
  SysWord word;          // the leaf letter as a one-symbol word
  std::vector<DerivationTree> children;
  bool is_leaf() const { return variable.empty(); }
};
std::vector<DerivationTree> derivation_trees(const AlgebraicSystem& sys, const std::string& x, const Word& u,
                                             const Limits& limits = Limits{});
Weight tree_weight(const AlgebraicSystem& sys, const DerivationTree& t);
std::string tree_to_string(const DerivationTree& t);

struct SystemWithStart {
  AlgebraicSystem system;
  std::string start;
};

// Variables "(p,q)" for state pairs plus a start variable; weakly strict.
SystemWithStart wnwa_to_system(const Wnwa& a);
// States are pairs over the variables and a bottom symbol.
Wnwa gnf_to_wnwa(const AlgebraicSystem& sys, const std::string& y);
// Variables "(p,q,0)" and "(p,q,1)" for pairs of equal sort, with the
// bracket terms already inlined so that the system is proper, plus a start
// variable for the initial/final weighted combination.
SystemWithStart wpa_to_system(const Wpa& a);

Weight project_nw_series(const Wnwa& a, const Word& w, const Limits& limits = Limits{});
Weight project_text_series(const Wpa& a, const Word& w, const Limits& limits = Limits{});

// Word patterns: variables replaced by "|".
SysWord pattern(const AlgebraicSystem& sys, const SysWord& w);
// Non-terminal support words of distinct variables have distinct patterns.
bool patterns_disjoint(const AlgebraicSystem& sys);

struct SrfoResult {
  Formula sentence;
  // The normalized system; its solution at the start variable is the
  // original one restricted to words of length at least two.
  AlgebraicSystem normalized;
};
// Needs a system whose supports are single letters or start and end with a
// letter. `order` fixes the processing order of the variables (default:
// declaration order).
SrfoResult system_to_srfo(const AlgebraicSystem& sys, const std::string& y, std::vector<std::string> order = {},
                          const Limits& limits = Limits{});

AlgebraicSystem system_from_json(const Json& j);
Json system_to_json(const AlgebraicSystem& sys);

}  // namespace nestweight
