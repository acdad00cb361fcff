#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nestweight/formula.hpp"
#include "nestweight/limits.hpp"
#include "nestweight/nested_word.hpp"
#include "nestweight/semiring.hpp"
#include "nestweight/text.hpp"

namespace nestweight {

// Which reading the edge atom gets.
enum class Signature { nested, text };
Signature signature_from_name(const std::string& name);
const char* signature_name(Signature s);

// A finite structure over positions 1..n with the positional order, labels
// and one binary edge relation.
class Structure {
 public:
  Structure() = default;
  Structure(Signature sig, Word labels, const std::vector<std::pair<int, int>>& edges);
  static Structure of(const NestedWord& nw);
  static Structure of(const Text& t);

  Signature signature() const { return sig_; }
  int size() const { return static_cast<int>(labels_.size()); }
  const Word& labels() const { return labels_; }
  const Symbol& label(int i) const { return labels_[i - 1]; }
  bool edge(int i, int j) const { return edges_[static_cast<size_t>(i) * (size() + 1) + j] != 0; }

  // Validating conversions back; nullopt when the edge relation does not
  // describe a nesting (resp. an alternating text).
  std::optional<NestedWord> as_nested_word() const;
  std::optional<Text> as_text() const;

  friend bool operator==(const Structure&, const Structure&) = default;

 private:
  Signature sig_ = Signature::nested;
  Word labels_;
  std::vector<char> edges_;
};

// Variables to position sets; first-order variables map to singletons.
using Assignment = std::map<std::string, std::set<int>>;

Weight eval_weighted(const Semiring& sr, const Formula& f, const Structure& s, const Assignment& g = {},
                     const Limits& limits = Limits{});
bool eval_boolean(const Formula& f, const Structure& s, const Assignment& g = {}, const Limits& limits = Limits{});

// Classical formula to its characteristic forms. Constants are rejected.
Formula disambiguate_plus(const Formula& f);
Formula disambiguate_minus(const Formula& f);
// Same semantics, but subformulas that are already syntactically
// unambiguous are kept, with their recognized dual as negative form. Avoids
// disambiguating characteristic forms a second time.
Formula characteristic_plus(const Formula& f);
Formula characteristic_minus(const Formula& f);
// Weighted implication: f- or (f+ and g).
Formula wimplies(const Formula& f, const Formula& g);

// For a formula in the image of the disambiguation, the matching opposite
// form (up to renaming of bound variables); nullopt otherwise.
std::optional<Formula> unambiguous_dual(const Formula& f);
bool is_syntactically_unambiguous(const Formula& f);

struct Fragments {
  bool synt_unambiguous = false;
  bool aumso = false;
  bool wumso = false;
  bool srmso = false;
  bool swrmso = false;
  bool fo = false;
  bool srfo = false;
  bool sremso = false;
  bool general = false;
};
Fragments classify(const Formula& f);

// Macros over the nested word signature. Bound variables avoid the
// argument names.
Formula min_pos(const std::string& x);
Formula max_pos(const std::string& x);
Formula is_call(const std::string& x);
Formula is_return(const std::string& x);
Formula first_nu(const std::string& x);
Formula next_nu(const std::string& x, const std::string& y);
// Arctic weights: +1 for each call at or before x, -1 for each return.
Formula open_pos(const std::string& x);
Formula nesting_depth_formula();  // exists x. open(x)
Formula inchild(const std::string& x, const std::string& y);
Formula surf(const std::string& x, const std::string& y, const std::string& x1, const std::string& y1);

// Sum over every nesting (resp. tree-definable second order) of the word.
Weight exists_nu(const Semiring& sr, const Formula& f, const Word& w, const Limits& limits = Limits{});
Weight exists_tdo(const Semiring& sr, const Formula& f, const Word& w, const Limits& limits = Limits{});

}  // namespace nestweight
