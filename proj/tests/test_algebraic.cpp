#include <map>

#include "doctest.h"
#include "nestweight/algebraic.hpp"
#include "nestweight/error.hpp"
#include "nestweight/logic.hpp"
#include "nestweight/random.hpp"
#include "support.hpp"

using namespace nestweight;

namespace {

using Series = std::map<Word, Weight>;

// Kleene iteration of the system on series truncated at length L, from the
// zero vector until nothing changes. Independent of the interval solver.
std::map<std::string, Series> kleene(const AlgebraicSystem& sys, int L) {
  const Semiring& k = sys.semiring();
  auto times = [&](const Series& a, const Series& b) {
    Series out;
    for (const auto& [u, cu] : a)
      for (const auto& [v, cv] : b) {
        if (static_cast<int>(u.size() + v.size()) > L) continue;
        Word w = u;
        w.insert(w.end(), v.begin(), v.end());
        auto it = out.find(w);
        Weight c = k.mul(cu, cv);
        if (it == out.end())
          out.emplace(w, c);
        else
          it->second = k.add(it->second, c);
      }
    return out;
  };
  auto prune = [&](Series s) {
    for (auto it = s.begin(); it != s.end();) it = k.is_zero(it->second) ? s.erase(it) : std::next(it);
    return s;
  };
  std::map<std::string, Series> cur;
  for (const auto& x : sys.variables()) cur[x] = {};
  for (int round = 0; round < 500; ++round) {
    std::map<std::string, Series> next;
    for (const auto& x : sys.variables()) {
      Series acc;
      for (const auto& [u, c] : sys.poly(x)) {
        Series term{{Word{}, c}};
        for (const auto& s : u) term = times(term, sys.is_variable(s) ? cur[s] : Series{{Word{s}, k.one()}});
        for (const auto& [w, cw] : term) {
          auto it = acc.find(w);
          if (it == acc.end())
            acc.emplace(w, cw);
          else
            it->second = k.add(it->second, cw);
        }
      }
      next[x] = prune(acc);
    }
    if (next == cur) return cur;
    cur = std::move(next);
  }
  FAIL("kleene iteration did not stabilize");
  return cur;
}

Weight at(const Series& s, const Word& w, const Semiring& k) {
  auto it = s.find(w);
  return it == s.end() ? k.zero() : it->second;
}

std::vector<Word> words_upto(const std::vector<Symbol>& alpha, int n, int from = 1) {
  std::vector<Word> out;
  for (int l = from; l <= n; ++l)
    for (auto& w : enumerate_words(alpha, l, 100000)) out.push_back(w);
  return out;
}

// Random system over {a, b} and {X, Y}: words start with a letter, so the
// result is proper (or weakly strict when eps is allowed).
AlgebraicSystem random_system(Rng& rng, const Semiring& k, bool eps) {
  AlgebraicSystem sys(k, {"a", "b"}, {"X", "Y"});
  std::uniform_int_distribution<int> nterms(1, 4), len(1, 3), sym(0, 3);
  const char* syms[] = {"a", "b", "X", "Y"};
  for (const auto& x : sys.variables()) {
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
      SysWord w{syms[sym(rng) % 2]};
      int l = len(rng);
      for (int i = 1; i < l; ++i) w.push_back(syms[sym(rng)]);
      sys.add(x, w, random_weight(rng, k));
    }
    if (eps && sym(rng) == 0) sys.add(x, {}, random_weight(rng, k));
  }
  return sys;
}

AlgebraicSystem random_gnf(Rng& rng, const Semiring& k) {
  AlgebraicSystem sys(k, {"a", "b"}, {"X", "Y"});
  std::uniform_int_distribution<int> coin(0, 2), v(0, 1);
  const char* vars[] = {"X", "Y"};
  for (const auto& x : sys.variables()) {
    sys.add(x, {v(rng) ? "a" : "b"}, random_weight(rng, k));
    for (const char* a : {"a", "b"}) {
      if (coin(rng) == 0) sys.add(x, {a, vars[v(rng)]}, random_weight(rng, k));
      if (coin(rng) == 0) sys.add(x, {a, vars[v(rng)], vars[v(rng)]}, random_weight(rng, k));
    }
  }
  return sys;
}

// Same transitions, but a single initial and a single final state.
Wnwa pinned(const Wnwa& a, int p, int q) {
  Wnwa b(a.semiring(), a.states());
  for (const auto& s : a.alphabet()) b.declare_symbol(s);
  for (const auto& [key, w] : a.internals()) b.add_internal(std::get<0>(key), std::get<1>(key), std::get<2>(key), w);
  for (const auto& [key, w] : a.calls()) b.add_call(std::get<0>(key), std::get<1>(key), std::get<2>(key), w);
  for (const auto& [key, w] : a.returns())
    b.add_return(std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key), w);
  b.add_initial(p, a.semiring().one());
  b.add_final(q, a.semiring().one());
  return b;
}

AlgebraicSystem motzkin() { return system_from_json(testing_support::data("motzkin_system.json")); }

Word as(int n) { return Word(n, "a"); }

}  // namespace

TEST_CASE("system class checks") {
  Semiring n(SemiringKind::natural);
  AlgebraicSystem m = motzkin();
  auto c = check_class(m);
  CHECK(c.proper);
  CHECK(c.weakly_strict);
  CHECK(c.gnf);
  CHECK_FALSE(c.sandwich_normal);

  AlgebraicSystem chain(n, {"a"}, {"X", "Y"});
  chain.add("X", {"Y"}, n.one());
  CHECK_FALSE(check_class(chain).proper);
  CHECK_FALSE(check_class(chain).weakly_strict);
  CHECK_THROWS_AS(SystemSolver{chain}, InputError);

  AlgebraicSystem s(n, {"a", "b"}, {"X"});
  s.add("X", {"a", "X", "b"}, n.one());
  c = check_class(s);
  CHECK(c.proper);
  CHECK(c.weakly_strict);
  CHECK(c.sandwich_normal);
  CHECK_FALSE(c.gnf);

  CHECK_THROWS_AS(AlgebraicSystem(n, {"a"}, {"a"}), InputError);
  AlgebraicSystem bad(n, {"a"}, {"X"});
  bad.add("X", {"a", "Z"}, n.one());
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("substitution") {
  Semiring n(SemiringKind::natural);
  AlgebraicSystem s(n, {"a", "b", "c"}, {"X", "Y"});
  s.add("X", {"a", "Y"}, n.parse("2"));
  s.add("Y", {"b"}, n.parse("3"));
  s.add("Y", {"c", "Y"}, n.one());
  AlgebraicSystem t = substitute(s, "X", {"a", "Y"}, 1);
  CHECK(n.format(t.coeff("X", {"a", "b"})) == "6");
  CHECK(n.format(t.coeff("X", {"a", "c", "Y"})) == "2");
  CHECK(n.is_zero(t.coeff("X", {"a", "Y"})));
  CHECK_THROWS_AS(substitute(s, "X", {"a", "Y"}, 0), InputError);
  CHECK_THROWS_AS(substitute(s, "X", {"b", "Y"}, 1), InputError);

  // self substitution uses the old polynomial
  AlgebraicSystem m = motzkin();
  AlgebraicSystem m2 = substitute(m, "X", {"a", "X"}, 1);
  CHECK(m2.poly("X").size() == 5);
  for (int len = 1; len <= 7; ++len) CHECK(coefficient(m, "X", as(len)) == coefficient(m2, "X", as(len)));

  Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    AlgebraicSystem r = random_system(rng, n, false);
    for (const auto& x : r.variables()) {
      for (const auto& [w, c] : r.poly(x)) {
        for (size_t p = 0; p < w.size(); ++p) {
          if (!r.is_variable(w[p])) continue;
          AlgebraicSystem r2 = substitute(r, x, w, static_cast<int>(p));
          SystemSolver a(r), b(r2);
          for (const auto& u : words_upto({"a", "b"}, 5)) CHECK(a.solve(u) == b.solve(u));
          goto next;
        }
      }
    }
  next:;
  }
}

TEST_CASE("Motzkin system coefficients") {
  AlgebraicSystem m = motzkin();
  SystemSolver solver(m);
  const char* expect[] = {"1", "1", "2", "4", "9", "21"};
  for (int len = 1; len <= 6; ++len) {
    CHECK(m.semiring().format(solver.coefficient("X", as(len))) == expect[len - 1]);
    CHECK(m.semiring().format(solver.coefficient("X", as(len))) == std::to_string(testing_support::motzkin(len - 1)));
  }
  CHECK(m.semiring().is_zero(solver.coefficient("X", {})));
  auto all = solve_coefficients(m, "X", 6);
  CHECK(all.size() == 6);

  auto trees = derivation_trees(m, "X", as(3));
  CHECK(trees.size() == 2);
  for (const auto& t : trees) CHECK(m.semiring().is_one(tree_weight(m, t)));
  std::set<std::string> shapes;
  for (const auto& t : trees) shapes.insert(tree_to_string(t));
  CHECK(shapes == std::set<std::string>{"X(a X(a X(a)))", "X(a X(a) X(a))"});
}

TEST_CASE("derivation trees") {
  Semiring n(SemiringKind::natural);
  AlgebraicSystem s(n, {"a", "b"}, {"X"});
  s.add("X", {"a"}, n.parse("2"));
  s.add("X", {"a", "X"}, n.parse("2"));
  auto trees = derivation_trees(s, "X", as(3));
  REQUIRE(trees.size() == 1);
  CHECK(n.format(tree_weight(s, trees[0])) == "8");
  CHECK(derivation_trees(s, "X", {"b"}).empty());
  CHECK(n.is_zero(coefficient(s, "X", {"b"})));

  AlgebraicSystem ws(n, {"a"}, {"X"});
  ws.add("X", {}, n.one());
  CHECK_THROWS_AS(derivation_trees(ws, "X", as(1)), InputError);

  // tree sums, interval solver and Kleene iteration agree on random proper systems
  Rng rng(11);
  for (SemiringKind kind : {SemiringKind::natural, SemiringKind::rational, SemiringKind::tropical}) {
    Semiring k(kind);
    for (int i = 0; i < 15; ++i) {
      AlgebraicSystem r = random_system(rng, k, false);
      REQUIRE(check_class(r).proper);
      auto oracle = kleene(r, 5);
      SystemSolver solver(r);
      for (const auto& u : words_upto({"a", "b"}, 5)) {
        auto sol = solver.solve(u);
        for (const auto& x : r.variables()) {
          Weight sum = k.zero();
          for (const auto& t : derivation_trees(r, x, u)) sum = k.add(sum, tree_weight(r, t));
          CHECK(sum == sol.at(x));
          CHECK(at(oracle[x], u, k) == sol.at(x));
        }
      }
    }
  }
}

TEST_CASE("weakly strict systems, unfold and strip") {
  Semiring n(SemiringKind::natural);
  AlgebraicSystem s(n, {"a"}, {"X"});
  s.add("X", {"a"}, n.one());
  s.add("X", {"a", "X"}, n.one());
  AlgebraicSystem u = unfold(s, 3);
  for (const auto& [w, c] : u.poly("X"))
    if (!u.is_terminal(w)) CHECK(u.letter_count(w) >= 3);
  CHECK(n.is_one(u.coeff("X", as(2))));
  for (int len = 1; len <= 6; ++len) CHECK(n.is_one(coefficient(s, "X", as(len))));

  AlgebraicSystem st = strip_short_words(s, 1);
  CHECK(check_class(st).proper);
  CHECK(n.is_zero(coefficient(st, "X", as(1))));
  for (int len = 2; len <= 6; ++len) CHECK(n.is_one(coefficient(st, "X", as(len))));

  AlgebraicSystem bad(n, {"a"}, {"X"});
  bad.add("X", {"X", "a"}, n.one());
  CHECK_THROWS_AS(unfold(bad, 2), InputError);
  CHECK_THROWS_AS(strip_short_words(bad, 1), InputError);

  Rng rng(5);
  for (SemiringKind kind : {SemiringKind::natural, SemiringKind::rational}) {
    Semiring k(kind);
    for (int i = 0; i < 20; ++i) {
      AlgebraicSystem r = random_system(rng, k, true);
      REQUIRE(check_class(r).weakly_strict);
      auto oracle = kleene(r, 6);
      SystemSolver a(r);
      AlgebraicSystem r3 = unfold(r, 3);
      SystemSolver b(r3);
      for (int kk : {0, 1, 2}) {
        AlgebraicSystem rs = strip_short_words(r, kk);
        CHECK(check_class(rs).proper);
        SystemSolver c(rs);
        for (const auto& w : words_upto({"a", "b"}, 5, 0)) {
          auto sc = c.solve(w);
          for (const auto& x : r.variables()) {
            Weight expect = static_cast<int>(w.size()) > kk ? at(oracle[x], w, k) : k.zero();
            CHECK(sc.at(x) == expect);
          }
        }
      }
      for (const auto& w : words_upto({"a", "b"}, 6, 0)) {
        auto sa = a.solve(w);
        CHECK(sa == b.solve(w));
        for (const auto& x : r.variables()) CHECK(sa.at(x) == at(oracle[x], w, k));
        // read off the unfolded polynomial for short words
        if (w.size() < 3)
          for (const auto& x : r.variables()) CHECK(r3.coeff(x, w) == sa.at(x));
      }
    }
  }
}

TEST_CASE("boolean systems give the derivable words") {
  Semiring b(SemiringKind::boolean);
  AlgebraicSystem s(b, {"a", "b"}, {"X"});
  s.add("X", {"a", "b"}, b.one());
  s.add("X", {"a", "X", "b"}, b.one());
  auto sol = solve_coefficients(s, "X", 6);
  std::set<Word> expect{{"a", "b"}, {"a", "a", "b", "b"}, {"a", "a", "a", "b", "b", "b"}};
  std::set<Word> got;
  for (const auto& [w, c] : sol) got.insert(w);
  CHECK(got == expect);
}

TEST_CASE("nested word automata to systems") {
  Wnwa ex = wnwa_from_json(testing_support::data("program_automaton.json"));
  NestedWord nw = nested_word_from_json(testing_support::data("program_trace.json"));
  auto [sys, start] = wnwa_to_system(ex);
  CHECK(check_class(sys).weakly_strict);
  CHECK(sys.semiring().format(coefficient(sys, start, nw.letters())) == "1/64");
  CHECK(sys.semiring().format(project_nw_series(ex, nw.letters())) == "1/64");

  // all weights one, one state: the projection counts nestings
  Semiring n(SemiringKind::natural);
  Wnwa one(n, {"q"});
  one.add_initial(0, n.one());
  one.add_final(0, n.one());
  one.add_internal(0, "a", 0, n.one());
  one.add_call(0, "a", 0, n.one());
  one.add_return(0, 0, "a", 0, n.one());
  auto [osys, ostart] = wnwa_to_system(one);
  for (int len = 1; len <= 7; ++len) {
    CHECK(n.format(project_nw_series(one, as(len))) == std::to_string(testing_support::motzkin(len)));
    CHECK(n.format(coefficient(osys, ostart, as(len))) == std::to_string(testing_support::motzkin(len)));
  }
  Wnwa zero(n, {"q"});
  zero.declare_symbol("a");
  CHECK(n.is_zero(project_nw_series(zero, as(3))));

  Rng rng(3);
  for (SemiringKind kind : {SemiringKind::natural, SemiringKind::rational, SemiringKind::viterbi}) {
    Semiring k(kind);
    for (int i = 0; i < 6; ++i) {
      RandomWnwaOptions opt;
      opt.states = 1 + i % 2;
      Wnwa a = random_wnwa(rng, k, opt);
      auto [s, x] = wnwa_to_system(a);
      SystemSolver solver(s);
      for (const auto& w : words_upto({"a", "b"}, 5)) {
        auto sol = solver.solve(w);
        CHECK(sol.at(x) == project_nw_series(a, w));
        for (int p = 0; p < a.num_states(); ++p)
          for (int q = 0; q < a.num_states(); ++q)
            CHECK(sol.at("(" + a.states()[p] + "," + a.states()[q] + ")") == project_nw_series(pinned(a, p, q), w));
      }
    }
  }
}

TEST_CASE("Greibach systems to automata") {
  AlgebraicSystem m = motzkin();
  Wnwa a = gnf_to_wnwa(m, "X");
  for (int len = 1; len <= 6; ++len)
    CHECK(a.semiring().format(project_nw_series(a, as(len))) == std::to_string(testing_support::motzkin(len - 1)));

  Semiring n(SemiringKind::natural);
  AlgebraicSystem letters(n, {"a", "b"}, {"Y"});
  letters.add("Y", {"a"}, n.parse("3"));
  letters.add("Y", {"b"}, n.parse("5"));
  Wnwa l = gnf_to_wnwa(letters, "Y");
  CHECK(n.format(project_nw_series(l, {"a"})) == "3");
  CHECK(n.format(project_nw_series(l, {"b"})) == "5");
  CHECK(n.is_zero(project_nw_series(l, {"a", "b"})));

  AlgebraicSystem notgnf(n, {"a", "b"}, {"X"});
  notgnf.add("X", {"a", "X", "b"}, n.one());
  CHECK_THROWS_AS(gnf_to_wnwa(notgnf, "X"), InputError);

  Rng rng(13);
  for (SemiringKind kind : {SemiringKind::natural, SemiringKind::rational}) {
    Semiring k(kind);
    for (int i = 0; i < 8; ++i) {
      AlgebraicSystem g = random_gnf(rng, k);
      REQUIRE(check_class(g).gnf);
      SystemSolver solver(g);
      for (const auto& y : g.variables()) {
        Wnwa b = gnf_to_wnwa(g, y);
        for (const auto& w : words_upto({"a", "b"}, 4)) CHECK(project_nw_series(b, w) == solver.coefficient(y, w));
      }
    }
  }
}

TEST_CASE("parenthesizing automata to systems") {
  Rng rng(17);
  for (SemiringKind kind : {SemiringKind::natural, SemiringKind::rational}) {
    Semiring k(kind);
    for (int i = 0; i < 5; ++i) {
      RandomWpaOptions opt;
      opt.parens = 1 + i % 2;
      Wpa a = random_wpa(rng, k, opt);
      auto [s, x] = wpa_to_system(a);
      CHECK(check_class(s).proper);
      SystemSolver solver(s);
      for (const auto& w : words_upto({"a", "b"}, 4)) CHECK(solver.coefficient(x, w) == project_text_series(a, w));
    }
  }
  // no initial weight: the projection vanishes
  Semiring n(SemiringKind::natural);
  Wpa z(n, {"h"}, {"v"}, {"p"});
  z.add_mu(0, "a", 0, n.one());
  z.add_gamma(0, n.one());
  auto [zs, zx] = wpa_to_system(z);
  for (int len = 1; len <= 4; ++len) {
    CHECK(n.is_zero(project_text_series(z, as(len))));
    CHECK(n.is_zero(coefficient(zs, zx, as(len))));
  }
  // a single horizontal loop reads words with their horizontal order only
  Wpa h(n, {"h"}, {"v"}, {"p"});
  h.add_mu(0, "a", 0, n.parse("2"));
  h.add_lambda(0, n.one());
  h.add_gamma(0, n.one());
  auto [hs, hx] = wpa_to_system(h);
  for (int len = 1; len <= 4; ++len) {
    Weight expect = n.parse(std::to_string(1 << len));
    CHECK(project_text_series(h, as(len)) == expect);
    CHECK(coefficient(hs, hx, as(len)) == expect);
  }
}

TEST_CASE("first-order sentences for algebraic series") {
  Semiring n(SemiringKind::natural);
  AlgebraicSystem ab(n, {"a", "b"}, {"X"});
  ab.add("X", {"a", "b"}, n.parse("5"));
  auto r = system_to_srfo(ab, "X");
  CHECK(classify(r.sentence).srfo);
  CHECK(n.format(exists_nu(n, r.sentence, {"a", "b"})) == "5");
  CHECK(n.is_zero(exists_nu(n, r.sentence, {"a", "a"})));
  CHECK(n.is_zero(exists_nu(n, r.sentence, {"a", "b", "b"})));
  Structure good = Structure::of(NestedWord({"a", "b"}, {{1, 2}}));
  Structure flat = Structure::of(NestedWord({"a", "b"}, {}));
  CHECK(n.format(eval_weighted(n, r.sentence, good)) == "5");
  CHECK(n.is_zero(eval_weighted(n, r.sentence, flat)));

  AlgebraicSystem sw = system_from_json(testing_support::data("motzkin_sandwich.json"));
  CHECK(check_class(sw).sandwich_normal);
  for (int len = 2; len <= 7; ++len)
    CHECK(n.format(coefficient(sw, "X", as(len))) == std::to_string(testing_support::motzkin(len - 1)));
  auto rs = system_to_srfo(sw, "X");
  CHECK(classify(rs.sentence).srfo);
  CHECK(n.is_zero(exists_nu(n, rs.sentence, as(1))));
  for (int len = 2; len <= 4; ++len)
    CHECK(exists_nu(n, rs.sentence, as(len)) == coefficient(rs.normalized, "X", as(len)));

  CHECK_THROWS_AS(system_to_srfo(motzkin(), "X"), InputError);
}

TEST_CASE("pattern separation over two variables") {
  Semiring n(SemiringKind::natural);
  AlgebraicSystem s(n, {"a", "b"}, {"X", "Y"});
  s.add("X", {"a", "Y", "a"}, n.one());
  s.add("X", {"a", "a"}, n.parse("2"));
  s.add("Y", {"a", "X", "a"}, n.one());
  s.add("Y", {"b", "b"}, n.one());
  s.add("Y", {"b"}, n.one());
  CHECK_FALSE(patterns_disjoint(s));
  auto r = system_to_srfo(s, "X");
  CHECK(patterns_disjoint(r.normalized));
  CHECK(classify(r.sentence).srfo);
  SystemSolver orig(s), norm(r.normalized);
  for (const auto& w : words_upto({"a", "b"}, 6)) {
    auto a = orig.solve(w);
    auto b = norm.solve(w);
    for (const auto& x : s.variables()) CHECK(b.at(x) == (w.size() > 1 ? a.at(x) : n.zero()));
  }
  for (const auto& w : words_upto({"a", "b"}, 4)) CHECK(exists_nu(n, r.sentence, w) == norm.coefficient("X", w));
}

TEST_CASE("system JSON round trip and errors") {
  AlgebraicSystem m = motzkin();
  Json j = system_to_json(m);
  AlgebraicSystem back = system_from_json(j);
  CHECK(system_to_json(back) == j);
  CHECK_THROWS_AS(system_from_json(Json::parse(R"({"semiring":"natural"})")), InputError);
  CHECK_THROWS_AS(system_from_json(Json::parse(
                      R"({"semiring":"natural","alphabet":["a"],"variables":["X"],"polys":{"Z":[]}})")),
                  InputError);
  CHECK_THROWS_AS(system_from_json(Json::parse(
                      R"({"semiring":"natural","alphabet":["a"],"variables":["X"],"polys":{"X":[{"word":["q"]}]}})")),
                  InputError);
}
