#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"
#include "nestweight/error.hpp"
#include "nestweight/random.hpp"
#include "nestweight/text.hpp"
#include "nestweight/wpa.hpp"
#include "support.hpp"

using namespace nestweight;

namespace {

// Separable permutations are exactly those avoiding 2413 and 3142.
bool separable_by_patterns(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          int w = p[a], x = p[b], y = p[c], z = p[d];
          if (y < w && w < z && z < x) return false;  // 2413
          if (x < z && z < w && w < y) return false;  // 3142
        }
  return true;
}

Text term(const std::string& letters) { return Text::singleton(std::string(1, letters[0])); }

}  // namespace

TEST_CASE("tree-definable orders are counted by the large Schroeder numbers") {
  const std::vector<std::size_t> expected = {1, 2, 6, 22, 90, 394};
  for (int n = 1; n <= 6; ++n) {
    auto all = enumerate_tdo(n);
    CHECK(all.size() == expected[n - 1]);
    std::set<std::vector<int>> listed(all.begin(), all.end());
    CHECK(listed.size() == all.size());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::size_t separable = 0;
    do {
      bool sep = separable_by_patterns(perm);
      CHECK(is_alternating(perm) == sep);
      CHECK(listed.count(perm) == (sep ? 1u : 0u));
      separable += sep;
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(separable == expected[n - 1]);
  }
  CHECK_THROWS_AS(enumerate_tdo(10), GuardError);
  CHECK_THROWS_AS(is_alternating({1, 1}), InputError);
}

TEST_CASE("figure text from its term") {
  Text a = term("a"), b = term("b"), c = term("c");
  Text left = compose(Sort::vertical, {a, a});
  Text cab = compose(Sort::horizontal, {c, a, b});
  Text right = compose(Sort::vertical, {c, a, cab, b});
  Text t = compose(Sort::horizontal, {left, right});
  CHECK(t == text_from_json(testing_support::data("figure_text.json")));
  CHECK(t.order2() == std::vector<int>{2, 1, 8, 5, 6, 7, 4, 3});
  auto d = decompose(t);
  CHECK(!d.singleton);
  CHECK(d.sort == Sort::horizontal);
  CHECK(d.blocks == std::vector<Interval>{{1, 2}, {3, 8}});
  auto d2 = decompose(t.factor(3, 8));
  CHECK(d2.sort == Sort::vertical);
  CHECK(d2.blocks == std::vector<Interval>{{1, 1}, {2, 2}, {3, 5}, {6, 6}});
  auto primes = prime_clans(t);
  for (Interval i : {Interval{1, 2}, Interval{3, 8}, Interval{5, 7}})
    CHECK(std::find(primes.begin(), primes.end(), i) != primes.end());
  CHECK_THROWS_AS(Text(split_word("abcd"), {2, 4, 1, 3}), InputError);
}

TEST_CASE("clans of a horizontal chain") {
  Text t = compose(Sort::horizontal, {term("a"), term("b"), term("c")});
  CHECK(clans(t).size() == 6);
  CHECK(prime_clans(t) == std::vector<Interval>{{1, 1}, {1, 3}, {2, 2}, {3, 3}});
}

TEST_CASE("compose inverts decompose and clans are closed under overlapping union") {
  Rng rng(5);
  for (int n = 1; n <= 7; ++n)
    for (int rep = 0; rep < 20; ++rep) {
      Text t = random_text(rng, {"a", "b"}, n);
      auto d = decompose(t);
      if (!d.singleton) {
        std::vector<Text> fs;
        for (auto b : d.blocks) {
          fs.push_back(t.factor(b.lo, b.hi));
          if (fs.back().size() > 1) CHECK(decompose(fs.back()).sort != d.sort);
        }
        CHECK(compose(d.sort, fs) == t);
      }
      auto cs = clans(t);
      std::set<Interval> set(cs.begin(), cs.end());
      CHECK(set.count({1, n}) == 1);
      for (const auto& x : cs)
        for (const auto& y : cs)
          if (x.lo <= y.lo && y.lo <= x.hi && x.hi <= y.hi) {
            CHECK(set.count({x.lo, y.hi}) == 1);
            CHECK(set.count({y.lo, x.hi}) == 1);
          }
    }
}

TEST_CASE("parenthesizing automaton runs") {
  Semiring b(SemiringKind::boolean);
  Wpa a(b, {"h"}, {"v"}, {"s"});
  a.add_mu(0, "a", 0, b.one());
  a.add_mu(1, "a", 1, b.one());
  a.add_open(0, 0, 1, b.one());
  a.add_open(1, 0, 0, b.one());
  a.add_close(0, 0, 1, b.one());
  a.add_close(1, 0, 0, b.one());
  a.add_lambda(0, b.one());
  a.add_lambda(1, b.one());
  a.add_gamma(0, b.one());
  a.add_gamma(1, b.one());
  for (int n = 1; n <= 5; ++n)
    for (const Text& t : enumerate_texts(Word(n, "a"))) {
      CHECK(wpa_behavior(a, t) == b.one());
      CHECK(wpa_behavior_runs(a, t) == b.one());
    }
  Text single = Text::singleton("a");
  CHECK(wpa_runs(a, single).size() == 2);
  // A horizontal product is wrapped once between vertical states, never twice.
  Text ab = compose(Sort::horizontal, {single, single});
  auto runs = wpa_runs(a, ab);
  CHECK(runs.size() == 2);
  int wrapped = 0;
  for (const auto& r : runs) wrapped += r.run.find("(s,") != std::string::npos;
  CHECK(wrapped == 1);
}

TEST_CASE("behavior by recursion equals the run sum") {
  Rng rng(17);
  for (SemiringKind kind : Semiring::all_kinds()) {
    Semiring k(kind);
    for (int trial = 0; trial < 5; ++trial) {
      Wpa a = random_wpa(rng, k, {.hstates = 2, .vstates = 2, .parens = 1 + trial % 2});
      for (int n = 1; n <= 5; ++n) {
        Text t = random_text(rng, {"a", "b"}, n);
        CHECK(wpa_behavior(a, t) == wpa_behavior_runs(a, t));
      }
      Wpa z = wpa_from_json(wpa_to_json(a));
      Text t = random_text(rng, {"a", "b"}, 4);
      CHECK(wpa_behavior(z, t) == wpa_behavior(a, t));
    }
  }
}

TEST_CASE("zero initial weights give the zero series") {
  Rng rng(2);
  Semiring n(SemiringKind::natural);
  Wpa a = random_wpa(rng, n);
  auto j = wpa_to_json(a);
  j["lambda"] = Json::object();
  Wpa z = wpa_from_json(j);
  for (const Text& t : enumerate_texts(split_word("aba"))) CHECK(n.is_zero(wpa_behavior(z, t)));
}
