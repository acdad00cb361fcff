#include "nestweight/semiring.hpp"

#include <algorithm>

#include "nestweight/error.hpp"

namespace nestweight {

Weight Weight::infinity(SemiringKind kind) {
  Weight w(kind, Rational(0));
  w.infinite_ = true;
  return w;
}

Semiring Semiring::from_name(std::string_view name) {
  for (SemiringKind k : all_kinds())
    if (Semiring(k).name() == name) return Semiring(k);
  throw InputError("unknown semiring '" + std::string(name) + "'");
}

const std::vector<SemiringKind>& Semiring::all_kinds() {
  static const std::vector<SemiringKind> kinds = {SemiringKind::boolean,  SemiringKind::natural,
                                                  SemiringKind::rational, SemiringKind::tropical,
                                                  SemiringKind::arctic,   SemiringKind::viterbi,
                                                  SemiringKind::fuzzy};
  return kinds;
}

std::string_view Semiring::name() const {
  switch (kind_) {
    case SemiringKind::boolean: return "boolean";
    case SemiringKind::natural: return "natural";
    case SemiringKind::rational: return "rational";
    case SemiringKind::tropical: return "tropical";
    case SemiringKind::arctic: return "arctic";
    case SemiringKind::viterbi: return "viterbi";
    case SemiringKind::fuzzy: return "fuzzy";
  }
  return "?";
}

bool Semiring::has(SemiringClass c) const {
  switch (c) {
    case SemiringClass::field:
      return kind_ == SemiringKind::rational;
    case SemiringClass::zero_sum_free:
      return kind_ != SemiringKind::rational;
    case SemiringClass::locally_finite:
      return kind_ == SemiringKind::boolean || kind_ == SemiringKind::fuzzy;
    case SemiringClass::additively_locally_finite:
      // Idempotent addition makes every finitely generated additive monoid finite.
      return kind_ == SemiringKind::boolean || kind_ == SemiringKind::fuzzy || kind_ == SemiringKind::tropical ||
             kind_ == SemiringKind::arctic || kind_ == SemiringKind::viterbi;
  }
  return false;
}

Weight Semiring::zero() const {
  if (kind_ == SemiringKind::tropical || kind_ == SemiringKind::arctic) return Weight::infinity(kind_);
  return Weight(kind_, Rational(0));
}

Weight Semiring::one() const {
  if (kind_ == SemiringKind::tropical || kind_ == SemiringKind::arctic) return Weight(kind_, Rational(0));
  return Weight(kind_, Rational(1));
}

bool Semiring::is_zero(const Weight& w) const {
  if (kind_ == SemiringKind::tropical || kind_ == SemiringKind::arctic) return w.is_infinite();
  return w.value().is_zero();
}

void Semiring::check(const Weight& w) const {
  if (w.kind() != kind_) throw InputError("weight belongs to a different semiring than " + std::string(name()));
}

Weight Semiring::add(const Weight& a, const Weight& b) const {
  check(a);
  check(b);
  switch (kind_) {
    case SemiringKind::boolean:
      return Weight(kind_, Rational(!a.value().is_zero() || !b.value().is_zero() ? 1 : 0));
    case SemiringKind::natural:
    case SemiringKind::rational:
      if (a.value().is_zero()) return b;
      if (b.value().is_zero()) return a;
      return Weight(kind_, a.value() + b.value());
    case SemiringKind::tropical:
      if (a.is_infinite()) return b;
      if (b.is_infinite()) return a;
      return a.value() <= b.value() ? a : b;
    case SemiringKind::arctic:
      if (a.is_infinite()) return b;
      if (b.is_infinite()) return a;
      return a.value() >= b.value() ? a : b;
    case SemiringKind::viterbi:
    case SemiringKind::fuzzy:
      return a.value() >= b.value() ? a : b;
  }
  return a;
}

Weight Semiring::mul(const Weight& a, const Weight& b) const {
  check(a);
  check(b);
  switch (kind_) {
    case SemiringKind::boolean:
      return Weight(kind_, Rational(!a.value().is_zero() && !b.value().is_zero() ? 1 : 0));
    case SemiringKind::natural:
    case SemiringKind::rational:
    case SemiringKind::viterbi:
      if (a.value().is_one()) return b;
      if (b.value().is_one()) return a;
      return Weight(kind_, a.value() * b.value());
    case SemiringKind::tropical:
    case SemiringKind::arctic:
      if (a.is_infinite()) return a;
      if (b.is_infinite()) return b;
      return Weight(kind_, a.value() + b.value());
    case SemiringKind::fuzzy:
      return a.value() <= b.value() ? a : b;
  }
  return a;
}

Weight Semiring::from_rational(const Rational& r) const {
  auto bad = [&](const char* why) {
    return InputError("weight " + r.str() + " is not in the " + std::string(name()) + " semiring (" + why + ")");
  };
  switch (kind_) {
    case SemiringKind::boolean:
      if (!(r.is_zero() || r.is_one())) throw bad("expected 0 or 1");
      break;
    case SemiringKind::natural:
      if (!r.is_integer() || r.sign() < 0) throw bad("expected a non-negative integer");
      break;
    case SemiringKind::rational:
      break;
    case SemiringKind::tropical:
    case SemiringKind::arctic:
      if (!r.is_integer()) throw bad("expected an integer");
      break;
    case SemiringKind::viterbi:
    case SemiringKind::fuzzy:
      if (r.sign() < 0 || r > Rational(1)) throw bad("expected a value in [0,1]");
      break;
  }
  return Weight(kind_, r);
}

Weight Semiring::parse(std::string_view token) const {
  if (token == "inf") {
    if (kind_ != SemiringKind::tropical) throw InputError("'inf' is only a tropical weight");
    return zero();
  }
  if (token == "-inf") {
    if (kind_ != SemiringKind::arctic) throw InputError("'-inf' is only an arctic weight");
    return zero();
  }
  return from_rational(Rational::parse(token));
}

std::string Semiring::format(const Weight& w) const {
  check(w);
  if (w.is_infinite()) return kind_ == SemiringKind::tropical ? "inf" : "-inf";
  return w.value().str();
}

}  // namespace nestweight
