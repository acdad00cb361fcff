#include "nestweight/selfcheck.hpp"

#include <functional>

#include "nestweight/algebraic.hpp"
#include "nestweight/bridge.hpp"
#include "nestweight/error.hpp"
#include "nestweight/logic.hpp"
#include "nestweight/random.hpp"

namespace nestweight {

namespace {

const std::vector<Symbol> kAlpha = {"a", "b"};

class Suite {
 public:
  explicit Suite(std::string name) { r_.name = std::move(name); }
  void check(bool ok, const std::function<std::string()>& what) {
    ++r_.checks;
    if (ok) return;
    if (r_.failures++ == 0) r_.first_failure = what();
  }
  SuiteResult result() const { return r_; }

 private:
  SuiteResult r_;
};

std::string show(const NestedWord& nw) { return nested_word_to_json(nw).dump(); }

SuiteResult wnwa_dp(const SelfcheckOptions& o, Rng& rng, const Limits& lim) {
  Suite s("wnwa-dp");
  for (SemiringKind kind : Semiring::all_kinds()) {
    Semiring k(kind);
    for (int t = 0; t < o.instances; ++t) {
      Wnwa a = random_wnwa(rng, k, {.states = o.max_states, .alphabet = kAlpha, .density = 0.5});
      for (int n = 1; n <= o.max_len; ++n) {
        NestedWord nw = random_nested_word(rng, kAlpha, n);
        s.check(behavior(a, nw) == behavior_bruteforce(a, nw, lim),
                [&] { return std::string(k.name()) + " " + show(nw); });
      }
    }
  }
  return s.result();
}

SuiteResult wpa_dp(const SelfcheckOptions& o, Rng& rng, const Limits& lim) {
  Suite s("wpa-dp");
  for (SemiringKind kind : Semiring::all_kinds()) {
    Semiring k(kind);
    for (int t = 0; t < o.instances; ++t) {
      // the run oracle is exponential; keep it small
      int st = std::min(o.max_states, 2);
      Wpa a = random_wpa(rng, k, {.hstates = st, .vstates = st, .parens = 2});
      for (int n = 1; n <= std::min(o.max_len, 5); ++n) {
        Text tx = random_text(rng, kAlpha, n);
        s.check(wpa_behavior(a, tx) == wpa_behavior_runs(a, tx, lim),
                [&] { return std::string(k.name()) + " " + text_to_json(tx).dump(); });
      }
    }
  }
  return s.result();
}

SuiteResult encodings(const SelfcheckOptions& o, Rng& rng) {
  Suite s("encodings");
  for (int t = 0; t < 10 * o.instances; ++t) {
    int n = 1 + static_cast<int>(rng() % o.max_len);
    NestedWord nw = random_nested_word(rng, kAlpha, n);
    Text c = phi_circ(nw), b = phi_bullet(nw);
    auto back = phi_inverse(c, Sort::horizontal);
    auto back2 = phi_inverse(b, Sort::vertical);
    s.check(back && *back == nw && back2 && *back2 == nw, [&] { return "inverse " + show(nw); });
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        bool rev = phi_circ_reverses(nw, i, j);
        s.check(rev == !c.leq2(i, j) && rev == b.leq2(i, j), [&] { return "order " + show(nw); });
      }
  }
  return s.result();
}

SuiteResult translations(const SelfcheckOptions& o, Rng& rng) {
  Suite s("automaton-translations");
  for (SemiringKind kind : {SemiringKind::natural, SemiringKind::rational, SemiringKind::tropical}) {
    Semiring k(kind);
    for (int t = 0; t < o.instances; ++t) {
      Wnwa a = random_wnwa(rng, k, {.states = o.max_states, .alphabet = kAlpha, .density = 0.5});
      Wpa pa = wnwa_to_wpa(a);
      Wpa pb = random_wpa(rng, k, {.hstates = o.max_states, .vstates = o.max_states, .parens = 2});
      Wnwa b = wpa_to_wnwa(pb);
      for (int n = 1; n <= o.max_len; ++n) {
        NestedWord nw = random_nested_word(rng, kAlpha, n);
        s.check(wpa_behavior(pa, phi_circ(nw)) == behavior(a, nw), [&] { return "to-wpa " + show(nw); });
        s.check(behavior(b, nw) == wpa_behavior(pb, phi_circ(nw)), [&] { return "to-wnwa " + show(nw); });
      }
    }
  }
  return s.result();
}

SuiteResult disambiguation(const SelfcheckOptions& o, Rng& rng, const Limits& lim) {
  Suite s("disambiguation");
  std::vector<Semiring> srs;
  for (auto kd : Semiring::all_kinds()) srs.emplace_back(kd);
  for (int t = 0; t < 10 * o.instances; ++t) {
    Formula f = random_classical_formula(rng, 3);
    Formula p = disambiguate_plus(f), m = disambiguate_minus(f);
    int n = 1 + static_cast<int>(rng() % o.max_len);
    NestedWord nw = random_nested_word(rng, kAlpha, n);
    Structure st = Structure::of(nw);
    Assignment g = random_assignment(rng, n);
    bool truth = eval_boolean(f, st, g, lim);
    for (const auto& sr : srs) {
      Weight wp = eval_weighted(sr, p, st, g, lim), wm = eval_weighted(sr, m, st, g, lim);
      s.check(wp == (truth ? sr.one() : sr.zero()) && sr.add(wp, wm) == sr.one(),
              [&] { return std::string(sr.name()) + " " + to_sexpr(f) + " on " + show(nw); });
    }
  }
  return s.result();
}

SuiteResult systems(const SelfcheckOptions& o, Rng& rng, const Limits& lim) {
  Suite s("automata-to-systems");
  int len = std::min(o.max_len, 4);
  for (SemiringKind kind : {SemiringKind::natural, SemiringKind::rational}) {
    Semiring k(kind);
    for (int t = 0; t < o.instances; ++t) {
      Wnwa a = random_wnwa(rng, k, {.states = std::min(o.max_states, 2), .alphabet = kAlpha, .density = 0.5});
      SystemWithStart sys = wnwa_to_system(a);
      SystemSolver solver(sys.system);
      Wpa pa = random_wpa(rng, k, {.hstates = 1, .vstates = 1, .parens = 1});
      SystemWithStart tsys = wpa_to_system(pa);
      SystemSolver tsolver(tsys.system);
      for (int n = 1; n <= len; ++n)
        for (const Word& w : enumerate_words(kAlpha, n, 64)) {
          s.check(solver.coefficient(sys.start, w) == project_nw_series(a, w, lim),
                  [&] { return "wnwa " + join_word(w); });
          s.check(tsolver.coefficient(tsys.start, w) == project_text_series(pa, w, lim),
                  [&] { return "wpa " + join_word(w); });
        }
    }
  }
  return s.result();
}

SuiteResult json_roundtrip(const SelfcheckOptions& o, Rng& rng) {
  Suite s("json-roundtrip");
  for (SemiringKind kind : Semiring::all_kinds()) {
    Semiring k(kind);
    for (int t = 0; t < o.instances; ++t) {
      Wnwa a = random_wnwa(rng, k, {.states = o.max_states, .alphabet = kAlpha, .density = 0.5});
      Wnwa a2 = wnwa_from_json(wnwa_to_json(a));
      s.check(wnwa_to_json(a2) == wnwa_to_json(a), [&] { return std::string(k.name()) + " wnwa"; });
      Wpa p = random_wpa(rng, k, {.hstates = o.max_states, .vstates = o.max_states, .parens = 2});
      Wpa p2 = wpa_from_json(wpa_to_json(p));
      s.check(wpa_to_json(p2) == wpa_to_json(p), [&] { return std::string(k.name()) + " wpa"; });
      Formula f = random_classical_formula(rng, 3);
      s.check(structurally_equal(parse_formula(to_sexpr(f)), f), [&] { return to_sexpr(f); });
    }
  }
  return s.result();
}

}  // namespace

std::vector<SuiteResult> run_selfcheck(const SelfcheckOptions& o, const Limits& limits) {
  if (o.max_len < 1 || o.max_states < 1 || o.instances < 1)
    throw InputError("selfcheck bounds must be positive");
  // every suite gets its own stream so that adding one does not shift the others
  auto stream = [&](int i) { return Rng(o.seed * 1000003ULL + static_cast<std::uint64_t>(i)); };
  std::vector<SuiteResult> out;
  Rng r0 = stream(0), r1 = stream(1), r2 = stream(2), r3 = stream(3), r4 = stream(4), r5 = stream(5),
      r6 = stream(6);
  out.push_back(wnwa_dp(o, r0, limits));
  out.push_back(wpa_dp(o, r1, limits));
  out.push_back(encodings(o, r2));
  out.push_back(translations(o, r3));
  out.push_back(disambiguation(o, r4, limits));
  out.push_back(systems(o, r5, limits));
  out.push_back(json_roundtrip(o, r6));
  return out;
}

}  // namespace nestweight
