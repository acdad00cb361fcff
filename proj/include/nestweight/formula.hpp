#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "nestweight/nested_word.hpp"

namespace nestweight {

enum class Op {
  constant,
  eq,     // x = y
  lab,    // Lab_a(x)
  leq,    // x <= y in the positional order
  edge,   // nu(x,y) on nested words, x <=2 y on texts
  in,     // x in X
  neg,    // weighted formulas only negate atoms; classical ones may negate anything
  conj,
  disj,
  exists1,
  exists2,
  forall1,
  forall2,
};

struct Node;
using Formula = std::shared_ptr<const Node>;

// Immutable formula tree. For atoms a and b are variable names (lab keeps
// the symbol in a and the variable in b), for quantifiers a is the bound
// variable and left the body, for constants token holds the weight text.
struct Node {
  Op op = Op::constant;
  std::string a;
  std::string b;
  std::string token;
  Formula left;
  Formula right;
};

bool is_atom(Op op);
inline bool is_atom(const Formula& f) { return is_atom(f->op); }
bool is_quantifier(Op op);
// Lowercase initial means first order, uppercase second order.
bool is_first_order_name(const std::string& v);
bool is_second_order_name(const std::string& v);

// Builders. Variable sorts are checked.
Formula k(const std::string& token);
Formula eq(const std::string& x, const std::string& y);
Formula lab(const Symbol& a, const std::string& x);
Formula leq(const std::string& x, const std::string& y);
Formula edge(const std::string& x, const std::string& y);
Formula in(const std::string& x, const std::string& X);
Formula neg(Formula f);
Formula conj(Formula f, Formula g);
Formula disj(Formula f, Formula g);
// Folds; an empty list is rejected.
Formula conj(const std::vector<Formula>& fs);
Formula disj(const std::vector<Formula>& fs);
// Picks the first or second order quantifier from the variable name.
Formula exists(const std::string& v, Formula body);
Formula forall(const std::string& v, Formula body);
Formula exists(const std::vector<std::string>& vs, Formula body);
Formula forall(const std::vector<std::string>& vs, Formula body);

// Classical abbreviations (not weighted formulas in general).
Formula lt(const std::string& x, const std::string& y);  // not (y <= x)
Formula implies(Formula f, Formula g);                   // not f or g
Formula iff(Formula f, Formula g);
Formula verum();  // forall x. x = x
Formula lex_less(const std::string& X, const std::string& Y);

std::set<std::string> free_vars(const Formula& f);
// Every variable name occurring in f, bound or free.
std::set<std::string> all_vars(const Formula& f);
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

// Capture-avoiding simultaneous renaming of free variables.
Formula rename(const Formula& f, const std::map<std::string, std::string>& m);

bool structurally_equal(const Formula& f, const Formula& g);
bool alpha_equal(const Formula& f, const Formula& g);
int formula_size(const Formula& f);
bool has_constant(const Formula& f);
// Negation only on atoms.
bool is_weighted_syntax(const Formula& f);

std::string to_sexpr(const Formula& f);
// Throws InputError with the offending position.
Formula parse_formula(const std::string& text);

}  // namespace nestweight
