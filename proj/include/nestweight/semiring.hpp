#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nestweight/rational.hpp"

namespace nestweight {

enum class SemiringKind { boolean, natural, rational, tropical, arctic, viterbi, fuzzy };

enum class SemiringClass {
  additively_locally_finite,
  locally_finite,
  field,
  zero_sum_free,
};

// An element of one of the supported semirings. The infinite flag marks the
// tropical zero (+inf) and the arctic zero (-inf).
class Weight {
 public:
  Weight() = default;
  Weight(SemiringKind kind, Rational value) : kind_(kind), value_(std::move(value)) {}
  static Weight infinity(SemiringKind kind);

  SemiringKind kind() const { return kind_; }
  bool is_infinite() const { return infinite_; }
  const Rational& value() const { return value_; }

  friend bool operator==(const Weight& a, const Weight& b) {
    return a.kind_ == b.kind_ && a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  SemiringKind kind_ = SemiringKind::natural;
  bool infinite_ = false;
  Rational value_;
};

class Semiring {
 public:
  explicit Semiring(SemiringKind kind = SemiringKind::natural) : kind_(kind) {}
  // "boolean", "natural", "rational", "tropical", "arctic", "viterbi", "fuzzy".
  static Semiring from_name(std::string_view name);
  static const std::vector<SemiringKind>& all_kinds();

  SemiringKind kind() const { return kind_; }
  std::string_view name() const;
  bool has(SemiringClass c) const;

  Weight zero() const;
  Weight one() const;
  Weight add(const Weight& a, const Weight& b) const;
  Weight mul(const Weight& a, const Weight& b) const;
  bool is_zero(const Weight& w) const;
  bool is_one(const Weight& w) const { return w == one(); }

  // Parses a weight token and checks that it lies in the carrier.
  Weight parse(std::string_view token) const;
  // Checks membership of an arbitrary rational in the carrier.
  Weight from_rational(const Rational& r) const;
  std::string format(const Weight& w) const;

  friend bool operator==(const Semiring& a, const Semiring& b) { return a.kind_ == b.kind_; }

 private:
  void check(const Weight& w) const;

  SemiringKind kind_;
};

}  // namespace nestweight
