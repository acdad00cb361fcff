#include <algorithm>
#include <random>

#include "doctest.h"
#include "nestweight/bridge.hpp"
#include "nestweight/error.hpp"
#include "nestweight/logic.hpp"
#include "nestweight/random.hpp"
#include "nestweight/scheme.hpp"
#include "support.hpp"

using namespace nestweight;

namespace {

NestedWord figure() { return nested_word_from_json(testing_support::data("figure_nested_word.json")); }

Weight nat(long long v) { return Weight(SemiringKind::natural, Rational(v)); }

// Depth of each call: the number of arcs enclosing it, itself included.
int call_depth(const NestedWord& nw, int c) {
  int d = 0;
  for (const Arc& a : nw.arcs())
    if (a.call <= c && c <= a.ret) ++d;
  return d;
}

std::vector<std::set<int>> parity_sets(const NestedWord& nw) {
  std::vector<std::set<int>> p(4);
  for (const Arc& a : nw.arcs()) {
    bool odd = call_depth(nw, a.call) % 2 == 1;
    p[odd ? 0 : 1].insert(a.call);
    p[odd ? 2 : 3].insert(a.ret);
  }
  return p;
}

}  // namespace

TEST_CASE("free variables") {
  CHECK(free_vars(exists("x", lab("a", "x"))).empty());
  CHECK(free_vars(in("x", "X")) == std::set<std::string>{"x", "X"});
  CHECK(free_vars(open_pos("x")) == std::set<std::string>{"x"});
  CHECK(free_vars(conj(exists("x", eq("x", "y")), leq("x", "x"))) == std::set<std::string>{"x", "y"});
}

TEST_CASE("s-expressions round trip") {
  Formula f = parse_formula("(E1 x (and (k \"3/4\") (or (lab a x) (not (in x X)))))");
  CHECK(to_sexpr(f) == "(E1 x (and (k \"3/4\") (or (lab a x) (not (in x X)))))");
  CHECK(structurally_equal(parse_formula(to_sexpr(f)), f));
  CHECK(structurally_equal(parse_formula("(and (= x y) (<= x y) (edge y x))"),
                           conj(conj(eq("x", "y"), leq("x", "y")), edge("y", "x"))));
  CHECK(parse_formula("(k 2)")->token == "2");
  CHECK_THROWS_AS(parse_formula("(E1 X (= x x))"), InputError);
  CHECK_THROWS_AS(parse_formula("(in X x)"), InputError);
  CHECK_THROWS_AS(parse_formula("(and (= x x))"), InputError);
  CHECK_THROWS_AS(parse_formula("(foo x)"), InputError);
  CHECK_THROWS_AS(parse_formula("(= x y) extra"), InputError);
  CHECK_THROWS_AS(parse_formula("(k \"1"), InputError);
}

TEST_CASE("renaming avoids capture and alpha equality ignores bound names") {
  Formula f = exists("y", edge("x", "y"));
  Formula g = rename(f, {{"x", "y"}});
  CHECK(free_vars(g) == std::set<std::string>{"y"});
  CHECK(alpha_equal(g, exists("w", edge("y", "w"))));
  CHECK_FALSE(alpha_equal(g, exists("y", edge("y", "y"))));
  CHECK(alpha_equal(forall("X", in("x", "X")), forall("Z", in("x", "Z"))));
  CHECK_FALSE(alpha_equal(forall("X", in("x", "X")), forall("Z", in("y", "Z"))));
  // swap
  CHECK(structurally_equal(rename(leq("x", "y"), {{"x", "y"}, {"y", "x"}}), leq("y", "x")));
}

TEST_CASE("counting formulas over the naturals") {
  Semiring n(SemiringKind::natural);
  for (int len = 1; len <= 5; ++len) {
    Structure s = Structure::of(NestedWord(Word(len, "a"), {}));
    CHECK(eval_weighted(n, exists("x", k("1")), s) == nat(len));
    long long p = 1;
    for (int i = 0; i < len; ++i) p *= len;
    CHECK(eval_weighted(n, forall("y", exists("x", k("1"))), s) == nat(p));
  }
}

TEST_CASE("nesting depth through the arctic semiring") {
  Semiring arc(SemiringKind::arctic);
  Formula f = nesting_depth_formula();
  CHECK(eval_weighted(arc, f, Structure::of(figure())) == Weight(SemiringKind::arctic, Rational(2)));
  for (int n = 1; n <= 6; ++n)
    for (const auto& arcs : enumerate_nestings(n)) {
      NestedWord nw(Word(n, "a"), arcs);
      CHECK(eval_weighted(arc, f, Structure::of(nw)) == Weight(SemiringKind::arctic, Rational(nw.depth())));
    }
  CHECK(classify(f).srmso);
}

TEST_CASE("boolean evaluation") {
  Structure s = Structure::of(figure());
  CHECK(eval_boolean(edge("x", "y"), s, {{"x", {3}}, {"y", {8}}}));
  CHECK_FALSE(eval_boolean(edge("x", "y"), s, {{"x", {3}}, {"y", {7}}}));
  for (int i = 1; i <= 8; ++i) CHECK_FALSE(eval_boolean(neg(eq("x", "x")), s, {{"x", {i}}}));
  CHECK_THROWS_AS(eval_boolean(k("1"), s), InputError);
  CHECK_THROWS_AS(eval_boolean(eq("x", "y"), s, {{"x", {1}}}), InputError);
  CHECK_THROWS_AS(eval_boolean(eq("x", "x"), s, {{"x", {1, 2}}}), InputError);
  CHECK_THROWS_AS(eval_boolean(eq("x", "x"), s, {{"x", {9}}}), InputError);
  Semiring n(SemiringKind::natural);
  CHECK_THROWS_AS(eval_weighted(n, neg(conj(eq("x", "x"), eq("x", "x"))), s, {{"x", {1}}}), InputError);
  CHECK_THROWS_AS(eval_weighted(n, k("1/2"), s), InputError);
  CHECK_THROWS_AS(eval_weighted(n, exists("X", k("1")), Structure::of(NestedWord(Word(13, "a"), {}))), GuardError);
}

TEST_CASE("the parity formula of the circ scheme") {
  NestedWord nw = figure();
  DefinitionScheme d = phi_circ_scheme({"a", "b", "c"});
  std::vector<std::set<int>> good{{1, 3}, {5}, {2, 8}, {7}};
  CHECK(parity_sets(nw) == good);
  Assignment g{{"X1", good[0]}, {"X2", good[1]}, {"Y1", good[2]}, {"Y2", good[3]}};
  CHECK(eval_boolean(d.theta, Structure::of(nw), g));
  g["X2"] = {5, 1};
  CHECK_FALSE(eval_boolean(d.theta, Structure::of(nw), g));
  g["X2"] = {5};
  g["Y2"] = {};
  CHECK_FALSE(eval_boolean(d.theta, Structure::of(nw), g));

  // exhaustive over the parameters: exactly the parity sets satisfy theta
  for (int n = 1; n <= 3; ++n)
    for (const auto& arcs : enumerate_nestings(n)) {
      NestedWord w(Word(n, "a"), arcs);
      auto sols = satisfying_parameters(d, Structure::of(w));
      REQUIRE(sols.size() == 1);
      CHECK(sols[0] == parity_sets(w));
    }
}

TEST_CASE("definition schemes") {
  NestedWord nw = figure();
  DefinitionScheme d = phi_circ_scheme({"a", "b", "c"});
  auto out = deftrans_apply(d, Structure::of(nw), parity_sets(nw));
  REQUIRE(out.has_value());
  Text fig2 = text_from_json(testing_support::data("figure_text.json"));
  CHECK(*out == Structure::of(fig2));
  CHECK(out->as_text() == fig2);
  CHECK_FALSE(deftrans_apply(d, Structure::of(nw), {{1}, {5}, {2, 8}, {7}}).has_value());
  CHECK_THROWS_AS(deftrans_apply(d, Structure::of(nw), {{1, 3}}), InputError);

  for (int n = 1; n <= 6; ++n)
    for (const auto& arcs : enumerate_nestings(n)) {
      NestedWord w(Word(n, "a"), arcs);
      auto t = deftrans_apply(d, Structure::of(w), parity_sets(w));
      REQUIRE(t.has_value());
      CHECK(*t == Structure::of(phi_circ(w)));
    }

  DefinitionScheme id = identity_scheme(Signature::nested, {"a", "b", "c"});
  CHECK(deftrans_apply(id, Structure::of(nw), {}) == Structure::of(nw));
  DefinitionScheme idt = identity_scheme(Signature::text, {"a", "b", "c"});
  CHECK(deftrans_apply(idt, Structure::of(fig2), {}) == Structure::of(fig2));

  DefinitionScheme bad = id;
  bad.order = eq("x", "y");
  CHECK_THROWS_AS(deftrans_apply(bad, Structure::of(nw), {}), InputError);
  bad = id;
  bad.delta = eq("x", "z");
  CHECK_THROWS_AS(deftrans_apply(bad, Structure::of(nw), {}), InputError);
  bad = id;
  bad.labels.erase("c");
  CHECK_THROWS_AS(deftrans_apply(bad, Structure::of(nw), {}), InputError);
}

TEST_CASE("disambiguation rules") {
  Formula a = lab("a", "x");
  CHECK(structurally_equal(disambiguate_plus(a), a));
  CHECK(structurally_equal(disambiguate_minus(a), neg(a)));
  Formula psi = disj(a, exists("y", edge("x", "y")));
  CHECK(structurally_equal(disambiguate_plus(neg(psi)), disambiguate_minus(psi)));
  CHECK(structurally_equal(disambiguate_minus(neg(psi)), disambiguate_plus(psi)));
  CHECK_THROWS_AS(disambiguate_plus(conj(a, k("2"))), InputError);

  Semiring n(SemiringKind::natural);
  Formula some_a = disambiguate_plus(exists("x", lab("a", "x")));
  for (int len = 1; len <= 4; ++len)
    for (const auto& nw : enumerate_nested_words({"a", "b"}, len)) {
      bool has_a = std::find(nw.letters().begin(), nw.letters().end(), "a") != nw.letters().end();
      CHECK(eval_weighted(n, some_a, Structure::of(nw)) == nat(has_a ? 1 : 0));
    }
}

TEST_CASE("characteristic forms on random classical formulas") {
  Rng rng(7);
  std::vector<Semiring> srs;
  for (auto kd : Semiring::all_kinds()) srs.emplace_back(kd);
  for (int iter = 0; iter < 300; ++iter) {
    Formula f = random_classical_formula(rng, 3);
    Formula p = disambiguate_plus(f), m = disambiguate_minus(f);
    REQUIRE(is_weighted_syntax(p));
    auto dp = unambiguous_dual(p);
    REQUIRE(dp.has_value());
    CHECK(alpha_equal(*dp, m));
    auto dm = unambiguous_dual(m);
    REQUIRE(dm.has_value());
    CHECK(alpha_equal(*dm, p));
    int len = 1 + static_cast<int>(rng() % 4);
    NestedWord nw = random_nested_word(rng, {"a", "b"}, len);
    Structure s = Structure::of(nw);
    Assignment g = random_assignment(rng, len);
    bool truth = eval_boolean(f, s, g);
    for (const auto& sr : srs) {
      Weight wp = eval_weighted(sr, p, s, g), wm = eval_weighted(sr, m, s, g);
      CHECK(wp == (truth ? sr.one() : sr.zero()));
      CHECK(sr.add(wp, wm) == sr.one());
    }
  }
}

TEST_CASE("text structures read the edge as the second order") {
  Rng rng(11);
  for (int iter = 0; iter < 60; ++iter) {
    Formula f = random_classical_formula(rng, 3);
    int len = 1 + static_cast<int>(rng() % 4);
    Text t = random_text(rng, {"a", "b"}, len);
    Structure s = Structure::of(t);
    Assignment g = random_assignment(rng, len);
    Semiring b(SemiringKind::boolean);
    CHECK((eval_weighted(b, disambiguate_plus(f), s, g) == b.one()) == eval_boolean(f, s, g));
    CHECK(eval_boolean(edge("x", "y"), s, g) == t.leq2(*g["x"].begin(), *g["y"].begin()));
  }
}

TEST_CASE("evaluation ignores variables outside the free set") {
  Rng rng(3);
  Semiring n(SemiringKind::natural);
  for (int iter = 0; iter < 100; ++iter) {
    Formula f = conj(disambiguate_plus(random_classical_formula(rng, 2)), k("3"));
    Structure s = Structure::of(random_nested_word(rng, {"a", "b"}, 3));
    Assignment g = random_assignment(rng, 3);
    Assignment junk = g;
    junk["q"] = {2};
    junk["Junk"] = {1, 3};
    CHECK(eval_weighted(n, f, s, g) == eval_weighted(n, f, s, junk));
  }
}

TEST_CASE("boolean semiring agrees with classical satisfaction") {
  Rng rng(5);
  Semiring b(SemiringKind::boolean);
  int checked = 0;
  for (int iter = 0; iter < 400; ++iter) {
    Formula f = random_classical_formula(rng, 3);
    if (!is_weighted_syntax(f)) continue;
    ++checked;
    Structure s = Structure::of(random_nested_word(rng, {"a", "b"}, 3));
    Assignment g = random_assignment(rng, 3);
    CHECK((eval_weighted(b, f, s, g) == b.one()) == eval_boolean(f, s, g));
  }
  CHECK(checked > 50);
}

TEST_CASE("fragment classification") {
  Fragments c = classify(k("5"));
  CHECK(c.aumso);
  CHECK(c.wumso);
  CHECK_FALSE(c.synt_unambiguous);
  Fragments d = classify(nesting_depth_formula());
  CHECK(d.srmso);
  CHECK(d.srfo);
  CHECK(d.sremso);
  Fragments e = classify(forall("x", exists("y", k("1"))));
  CHECK(e.swrmso);
  CHECK_FALSE(e.srmso);
  CHECK(classify(exists("y", k("1"))).wumso);
  CHECK_FALSE(classify(exists("y", k("1"))).aumso);
  Fragments atom = classify(neg(edge("x", "y")));
  CHECK(atom.synt_unambiguous);
  // not the image of a disambiguation
  CHECK_FALSE(classify(disj(lab("a", "x"), lab("b", "x"))).synt_unambiguous);
  CHECK_FALSE(classify(exists("x", lab("a", "x"))).synt_unambiguous);
  CHECK(classify(disambiguate_plus(exists("x", lab("a", "x")))).synt_unambiguous);
  CHECK_FALSE(classify(forall("X", exists("x", in("x", "X")))).srmso);
  CHECK(classify(disambiguate_plus(forall("X", exists("x", in("x", "X"))))).srmso);
  Formula ex2 = exists("X", forall("x", disj(k("2"), disambiguate_plus(in("x", "X")))));
  CHECK(classify(ex2).sremso);
  CHECK_FALSE(classify(ex2).srfo);
  Fragments classical = classify(neg(conj(eq("x", "x"), eq("x", "x"))));
  CHECK_FALSE(classical.general);

  // lattice on random weighted formulas
  Rng rng(9);
  for (int iter = 0; iter < 300; ++iter) {
    Formula f = random_classical_formula(rng, 3);
    if (rng() % 2) f = disambiguate_plus(f);
    if (rng() % 3 == 0) f = conj(f, k("2"));
    if (rng() % 3 == 0) f = forall("x", f);
    if (rng() % 3 == 0) f = exists("x", f);
    Fragments r = classify(f);
    if (r.synt_unambiguous) CHECK(r.aumso);
    if (r.aumso) CHECK(r.wumso);
    if (r.srmso) CHECK(r.swrmso);
    if (r.srfo) CHECK(r.srmso);
    if (r.sremso) CHECK(r.srmso);
    if (r.srmso) CHECK(r.general);
  }
}

TEST_CASE("projections over nestings and second orders") {
  Semiring n(SemiringKind::natural);
  CHECK(exists_nu(n, k("1"), split_word("abab")) == nat(9));
  CHECK(exists_tdo(n, k("1"), split_word("abc")) == nat(6));
  CHECK(exists_nu(n, disambiguate_plus(exists("x", exists("y", edge("x", "y")))), split_word("aaa")) == nat(3));
  for (int len = 1; len <= 7; ++len)
    CHECK(exists_nu(n, k("1"), Word(len, "a")) == nat(testing_support::motzkin(len)));
}

TEST_CASE("formula translation through the circ scheme") {
  Semiring n(SemiringKind::natural);
  DefinitionScheme d = phi_circ_scheme({"a", "b"});
  Formula three = translate_formula(d, k("3"));
  Formula pairs = translate_formula(d, exists("x", exists("y", conj(edge("x", "y"), k("1")))));
  Formula agree = translate_formula(d, exists("x", exists("y", conj(conj(leq("x", "y"), edge("x", "y")), k("1")))));
  Formula alabels = translate_formula(d, forall("x", disj(disambiguate_plus(lab("a", "x")), k("2"))));
  for (int len = 1; len <= 4; ++len)
    for (const auto& nw : enumerate_nested_words({"a", "b"}, len)) {
      if (len == 4 && nw.letters()[0] == "b") continue;
      Structure s = Structure::of(nw);
      Structure img = Structure::of(phi_circ(nw));
      CHECK(eval_weighted(n, three, s) == nat(3));
      CHECK(eval_weighted(n, pairs, s) == nat(len * (len + 1) / 2));
      CHECK(eval_weighted(n, agree, s) ==
            eval_weighted(n, exists("x", exists("y", conj(conj(leq("x", "y"), edge("x", "y")), k("1")))), img));
      CHECK(eval_weighted(n, alabels, s) ==
            eval_weighted(n, forall("x", disj(disambiguate_plus(lab("a", "x")), k("2"))), img));
    }
  Formula au = disj(k("2"), disambiguate_plus(exists("x", edge("x", "x"))));
  REQUIRE(classify(au).aumso);
  CHECK(classify(translate_body(d, au)).aumso);
  Formula su = disambiguate_plus(forall("x", exists("y", edge("x", "y"))));
  CHECK(classify(translate_body(d, su)).synt_unambiguous);
  CHECK_THROWS_AS(translate_formula(d, lab("c", "x")), InputError);
}
