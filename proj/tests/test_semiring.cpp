#include "doctest.h"
#include "nestweight/error.hpp"
#include "nestweight/semiring.hpp"

using namespace nestweight;

namespace {

std::vector<Weight> samples(const Semiring& k) {
  std::vector<std::string> tokens;
  switch (k.kind()) {
    case SemiringKind::boolean: tokens = {"0", "1"}; break;
    case SemiringKind::natural: tokens = {"0", "1", "2", "7"}; break;
    case SemiringKind::rational: tokens = {"0", "1", "-3/4", "5/2"}; break;
    case SemiringKind::tropical: tokens = {"inf", "0", "-2", "5"}; break;
    case SemiringKind::arctic: tokens = {"-inf", "0", "-2", "5"}; break;
    case SemiringKind::viterbi:
    case SemiringKind::fuzzy: tokens = {"0", "1", "1/3", "3/4"}; break;
  }
  std::vector<Weight> out;
  for (auto& t : tokens) out.push_back(k.parse(t));
  return out;
}

}  // namespace

TEST_CASE("semiring axioms hold on sample elements") {
  for (SemiringKind kind : Semiring::all_kinds()) {
    Semiring k(kind);
    CAPTURE(std::string(k.name()));
    auto xs = samples(k);
    for (const auto& a : xs) {
      CHECK(k.add(a, k.zero()) == a);
      CHECK(k.mul(a, k.one()) == a);
      CHECK(k.mul(k.one(), a) == a);
      CHECK(k.is_zero(k.mul(a, k.zero())));
      CHECK(k.is_zero(k.mul(k.zero(), a)));
      for (const auto& b : xs) {
        CHECK(k.add(a, b) == k.add(b, a));
        for (const auto& c : xs) {
          CHECK(k.add(k.add(a, b), c) == k.add(a, k.add(b, c)));
          CHECK(k.mul(k.mul(a, b), c) == k.mul(a, k.mul(b, c)));
          CHECK(k.mul(a, k.add(b, c)) == k.add(k.mul(a, b), k.mul(a, c)));
          CHECK(k.mul(k.add(b, c), a) == k.add(k.mul(b, a), k.mul(c, a)));
        }
      }
    }
  }
}

TEST_CASE("semiring class flags") {
  CHECK(Semiring(SemiringKind::rational).has(SemiringClass::field));
  CHECK_FALSE(Semiring(SemiringKind::natural).has(SemiringClass::field));
  CHECK(Semiring(SemiringKind::tropical).has(SemiringClass::additively_locally_finite));
  CHECK(Semiring(SemiringKind::arctic).has(SemiringClass::additively_locally_finite));
  CHECK(Semiring(SemiringKind::viterbi).has(SemiringClass::additively_locally_finite));
  CHECK_FALSE(Semiring(SemiringKind::viterbi).has(SemiringClass::locally_finite));
  CHECK(Semiring(SemiringKind::boolean).has(SemiringClass::locally_finite));
  CHECK(Semiring(SemiringKind::fuzzy).has(SemiringClass::locally_finite));
  CHECK_FALSE(Semiring(SemiringKind::natural).has(SemiringClass::additively_locally_finite));
  CHECK(Semiring(SemiringKind::natural).has(SemiringClass::zero_sum_free));
  CHECK_FALSE(Semiring(SemiringKind::rational).has(SemiringClass::zero_sum_free));
}

TEST_CASE("weight tokens") {
  Semiring q(SemiringKind::rational);
  CHECK(q.format(q.parse("6/8")) == "3/4");
  CHECK(q.format(q.parse("-4/2")) == "-2");
  CHECK_THROWS_AS(q.parse("1/0"), InputError);
  CHECK_THROWS_AS(q.parse("1/-2"), InputError);
  CHECK_THROWS_AS(q.parse("x"), InputError);
  CHECK_THROWS_AS(q.parse("inf"), InputError);
  CHECK_THROWS_AS(Semiring(SemiringKind::natural).parse("-1"), InputError);
  CHECK_THROWS_AS(Semiring(SemiringKind::viterbi).parse("3/2"), InputError);
  CHECK_THROWS_AS(Semiring(SemiringKind::boolean).parse("2"), InputError);
  CHECK_THROWS_AS(Semiring(SemiringKind::tropical).parse("-inf"), InputError);
  CHECK_THROWS_AS(Semiring(SemiringKind::tropical).parse("1/2"), InputError);
  CHECK(Semiring(SemiringKind::arctic).format(Semiring(SemiringKind::arctic).zero()) == "-inf");
  CHECK_THROWS_AS(Semiring::from_name("reals"), InputError);
}

TEST_CASE("tropical and arctic arithmetic") {
  Semiring t(SemiringKind::tropical), a(SemiringKind::arctic);
  CHECK(t.format(t.add(t.parse("3"), t.parse("-1"))) == "-1");
  CHECK(t.format(t.mul(t.parse("3"), t.parse("-1"))) == "2");
  CHECK(a.format(a.add(a.parse("3"), a.parse("-1"))) == "3");
  CHECK(a.format(a.mul(a.parse("-inf"), a.parse("4"))) == "-inf");
}

TEST_CASE("rational arithmetic beyond machine words stays exact") {
  Semiring n(SemiringKind::natural);
  Weight w = n.parse("3037000499");
  Weight big = n.mul(n.mul(w, w), n.mul(w, w));
  CHECK(n.format(big) == "85070591620872599158135621271853498001");
  Weight back = n.parse("85070591620872599158135621271853498001");
  CHECK(back == big);
  Semiring q(SemiringKind::rational);
  Weight x = q.parse("1/9223372036854775807");
  CHECK(q.format(q.add(x, x)) == "2/9223372036854775807");
  CHECK(q.format(q.mul(x, x)) == "1/85070591730234615847396907784232501249");
}
