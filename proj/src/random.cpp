#include "nestweight/random.hpp"

#include "nestweight/error.hpp"

namespace nestweight {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

}  // namespace

Weight random_weight(Rng& rng, const Semiring& k) {
  switch (k.kind()) {
    case SemiringKind::boolean: return k.one();
    case SemiringKind::natural: return k.from_rational(Rational(uniform(rng, 1, 3)));
    case SemiringKind::rational: {
      int num = uniform(rng, -3, 3);
      if (num == 0) num = 1;
      return k.from_rational(Rational(num, uniform(rng, 1, 3)));
    }
    case SemiringKind::tropical:
    case SemiringKind::arctic: return k.from_rational(Rational(uniform(rng, -3, 4)));
    case SemiringKind::viterbi:
    case SemiringKind::fuzzy: {
      int den = uniform(rng, 1, 4);
      return k.from_rational(Rational(uniform(rng, 1, den), den));
    }
  }
  return k.one();
}

Wnwa random_wnwa(Rng& rng, const Semiring& k, const RandomWnwaOptions& opt) {
  std::vector<std::string> names;
  for (int i = 0; i < opt.states; ++i) names.push_back("q" + std::to_string(i));
  Wnwa a(k, names);
  const int n = opt.states;
  for (int q = 0; q < n; ++q) {
    if (coin(rng, 0.6)) a.add_initial(q, random_weight(rng, k));
    if (coin(rng, 0.6)) a.add_final(q, random_weight(rng, k));
  }
  for (const Symbol& s : opt.alphabet) {
    a.declare_symbol(s);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        if (coin(rng, opt.density)) a.add_internal(p, s, q, random_weight(rng, k));
        if (coin(rng, opt.density)) a.add_call(p, s, q, random_weight(rng, k));
        for (int l = 0; l < n; ++l)
          if (coin(rng, opt.density)) a.add_return(p, l, s, q, random_weight(rng, k));
      }
  }
  return a;
}

NestedWord random_nested_word(Rng& rng, const std::vector<Symbol>& alphabet, int n) {
  if (n < 1 || alphabet.empty()) throw InputError("random nested word needs n >= 1 and a nonempty alphabet");
  Word w;
  for (int i = 0; i < n; ++i) w.push_back(alphabet[uniform(rng, 0, static_cast<int>(alphabet.size()) - 1)]);
  // Left to right: open, close the innermost open call, or stay internal.
  std::vector<Arc> arcs;
  std::vector<int> open;
  for (int i = 1; i <= n; ++i) {
    int remaining = n - i;
    int choice = uniform(rng, 0, 2);
    if (choice == 1 && !open.empty()) {
      arcs.push_back({open.back(), i});
      open.pop_back();
    } else if (choice == 2 && remaining >= 1) {
      open.push_back(i);
    }
  }
  // Calls left open become internal positions.
  return NestedWord(std::move(w), std::move(arcs));
}

Wpa random_wpa(Rng& rng, const Semiring& k, const RandomWpaOptions& opt) {
  std::vector<std::string> h, v, p;
  for (int i = 0; i < opt.hstates; ++i) h.push_back("h" + std::to_string(i));
  for (int i = 0; i < opt.vstates; ++i) v.push_back("v" + std::to_string(i));
  for (int i = 0; i < opt.parens; ++i) p.push_back("s" + std::to_string(i));
  Wpa a(k, h, v, p);
  const int n = a.num_states();
  for (int q = 0; q < n; ++q) {
    if (coin(rng, 0.6)) a.add_lambda(q, random_weight(rng, k));
    if (coin(rng, 0.6)) a.add_gamma(q, random_weight(rng, k));
  }
  for (const Symbol& s : opt.alphabet) a.declare_symbol(s);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (a.is_h(x) == a.is_h(y)) {
        for (const Symbol& s : opt.alphabet)
          if (coin(rng, opt.density)) a.add_mu(x, s, y, random_weight(rng, k));
      } else {
        for (int s = 0; s < opt.parens; ++s) {
          if (coin(rng, opt.density)) a.add_open(x, s, y, random_weight(rng, k));
          if (coin(rng, opt.density)) a.add_close(x, s, y, random_weight(rng, k));
        }
      }
    }
  return a;
}

Text random_text(Rng& rng, const std::vector<Symbol>& alphabet, int n) {
  auto all = enumerate_tdo(n);
  Word labels;
  for (int i = 0; i < n; ++i) labels.push_back(alphabet[uniform(rng, 0, static_cast<int>(alphabet.size()) - 1)]);
  return Text(std::move(labels), all[uniform(rng, 0, static_cast<int>(all.size()) - 1)]);
}

Formula random_classical_formula(Rng& rng, int depth, const std::vector<Symbol>& labels) {
  static const char* fo[] = {"x", "y", "z"};
  if (labels.empty()) throw InputError("random formula needs at least one label");
  auto pick = [&](int m) { return uniform(rng, 0, m - 1); };
  if (depth <= 0 || pick(4) == 0) {
    std::string a = fo[pick(3)], b = fo[pick(3)];
    switch (pick(5)) {
      case 0: return eq(a, b);
      case 1: return lab(labels[pick(static_cast<int>(labels.size()))], a);
      case 2: return leq(a, b);
      case 3: return edge(a, b);
      default: return in(a, "X");
    }
  }
  auto sub = [&] { return random_classical_formula(rng, depth - 1, labels); };
  switch (pick(6)) {
    case 0: return neg(sub());
    case 1: { Formula l = sub(); return conj(l, sub()); }
    case 2: { Formula l = sub(); return disj(l, sub()); }
    case 3: { std::string v = fo[pick(3)]; return exists(v, sub()); }
    case 4: { std::string v = fo[pick(3)]; return forall(v, sub()); }
    default: return pick(2) ? exists("X", sub()) : forall("X", sub());
  }
}

Assignment random_assignment(Rng& rng, int n) {
  Assignment g;
  for (const char* v : {"x", "y", "z"}) g[v] = {uniform(rng, 1, n)};
  std::set<int> s;
  for (int i = 1; i <= n; ++i)
    if (coin(rng, 0.5)) s.insert(i);
  g["X"] = s;
  return g;
}

}  // namespace nestweight
