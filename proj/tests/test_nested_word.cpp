#include <set>

#include "doctest.h"
#include "nestweight/error.hpp"
#include "nestweight/nested_word.hpp"
#include "support.hpp"

using namespace nestweight;

TEST_CASE("nesting counts follow the Motzkin recurrence") {
  for (int n = 0; n <= 11; ++n) {
    auto all = enumerate_nestings(n);
    CHECK(static_cast<long long>(all.size()) == testing_support::motzkin(n));
    std::set<std::vector<Arc>> distinct(all.begin(), all.end());
    CHECK(distinct.size() == all.size());
    if (n > 0)
      for (const auto& arcs : all) CHECK_NOTHROW(NestedWord(Word(n, "a"), arcs));
  }
  CHECK_THROWS_AS(enumerate_nestings(15), GuardError);
  Limits wide;
  wide.max_nesting_length = 15;
  CHECK(enumerate_nestings(15, wide).size() == 310572);
}

TEST_CASE("figure nested word") {
  NestedWord nw = nested_word_from_json(testing_support::data("figure_nested_word.json"));
  CHECK(nw.size() == 8);
  CHECK(nw.kind(1) == PositionKind::call);
  CHECK(nw.kind(2) == PositionKind::ret);
  CHECK(nw.kind(4) == PositionKind::internal);
  CHECK(nw.partner(5) == 7);
  CHECK(nw.depth(1) == 1);
  CHECK(nw.depth(2) == 0);
  CHECK(nw.depth(3) == 1);
  CHECK(nw.depth(5) == 2);
  CHECK(nw.depth(6) == 2);
  CHECK(nw.depth(7) == 1);
  CHECK(nw.depth(8) == 0);
  CHECK(nw.depth() == 2);
  CHECK(nw.surface_arches() == std::vector<Arc>{{1, 2}, {3, 8}});
  NestedWord f = nw.factor(4, 8);
  CHECK(join_word(f.letters()) == "acabb");
  CHECK(f.arcs() == std::vector<Arc>{{2, 4}});
  CHECK(nested_word_to_json(nw) == testing_support::data("figure_nested_word.json"));
}

TEST_CASE("invalid nestings are rejected") {
  CHECK_THROWS_AS(NestedWord(split_word("ab"), {{2, 1}}), InputError);
  CHECK_THROWS_AS(NestedWord(split_word("abc"), {{1, 2}, {2, 3}}), InputError);
  CHECK_THROWS_AS(NestedWord(split_word("abcd"), {{1, 3}, {2, 4}}), InputError);
  CHECK_THROWS_AS(NestedWord(split_word("ab"), {{1, 3}}), InputError);
  CHECK_THROWS_AS(NestedWord(split_word("ab"), {{0, 2}}), InputError);
  CHECK_NOTHROW(NestedWord(split_word("abcd"), {{1, 4}, {2, 3}}));
}

TEST_CASE("word splitting") {
  CHECK(split_word("abc") == Word{"a", "b", "c"});
  CHECK(split_word("r call r") == Word{"r", "call", "r"});
  CHECK(join_word(Word{"r", "call"}) == "r call");
}

TEST_CASE("nested word enumeration order") {
  auto all = enumerate_nested_words({"b", "a"}, 3);
  CHECK(all.size() == 8 * 4);
  CHECK(std::is_sorted(all.begin(), all.end()));
}
