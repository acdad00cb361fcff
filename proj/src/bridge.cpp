#include "nestweight/bridge.hpp"

#include <map>

#include "nestweight/error.hpp"

namespace nestweight {

namespace {

// Encoding of positions lo..hi; the segment is closed under the nesting.
Text phi_segment(const NestedWord& nw, int lo, int hi, Sort s) {
  std::vector<Text> factors;
  int p = lo;
  while (p <= hi) {
    if (nw.kind(p) != PositionKind::call) {
      factors.push_back(Text::singleton(nw.letter(p)));
      ++p;
      continue;
    }
    // Everything from the first call on is a bracket term followed by the rest.
    int j = nw.partner(p);
    std::vector<Text> inner{Text::singleton(nw.letter(p))};
    if (p + 1 <= j - 1) inner.push_back(phi_segment(nw, p + 1, j - 1, opposite(s)));
    inner.push_back(Text::singleton(nw.letter(j)));
    factors.push_back(compose(opposite(s), inner));
    if (j + 1 <= hi) factors.push_back(phi_segment(nw, j + 1, hi, s));
    break;
  }
  return factors.size() == 1 ? factors.front() : compose(s, factors);
}

}  // namespace

Text phi(const NestedWord& nw, Sort top) { return phi_segment(nw, 1, nw.size(), top); }

bool phi_circ_reverses(const NestedWord& nw, int i, int j) {
  if (!(1 <= i && i < j && j <= nw.size())) throw InputError("expected 1 <= i < j <= n");
  // The tightest arc spanning i..j decides.
  const Arc* best = nullptr;
  for (const Arc& a : nw.arcs())
    if (a.call <= i && j <= a.ret && (!best || a.call > best->call)) best = &a;
  return best && nw.depth(best->call) % 2 == 1;
}

std::optional<NestedWord> phi_inverse(const Text& t, Sort top) {
  const int n = t.size();
  std::vector<Arc> arcs;
  for (const Interval& c : prime_clans(t)) {
    if (c.lo >= c.hi) continue;
    bool full = c.lo == 1 && c.hi == n;
    bool ok = top == Sort::horizontal ? !t.leq2(1, n) : t.leq2(1, n);
    if (!full || ok) arcs.push_back({c.lo, c.hi});
  }
  std::optional<NestedWord> nw;
  try {
    nw = NestedWord(t.labels(), arcs);
  } catch (const InputError&) {
    return std::nullopt;
  }
  if (!(phi(*nw, top) == t)) return std::nullopt;
  return nw;
}

namespace {

// Five-state classifier telling whether the horizontal encoding of a nested
// word is a singleton, a horizontal or a vertical product.
enum Cls { kBottom = 0, kPending = 1, kSingle = 2, kCirc = 3, kBullet = 4 };

Wnwa classifier(const Semiring& k, const std::vector<Symbol>& alphabet) {
  Wnwa c(k, {"bot", "?", "s", "circ", "bullet"});
  const Weight one = k.one();
  for (const Symbol& a : alphabet) {
    c.add_call(kBottom, a, kPending, one);
    c.add_internal(kBottom, a, kSingle, one);
    c.add_call(kSingle, a, kCirc, one);
    c.add_internal(kSingle, a, kCirc, one);
    c.add_call(kPending, a, kPending, one);
    c.add_internal(kPending, a, kPending, one);
    c.add_return(kPending, kBottom, a, kBullet, one);
    c.add_call(kBullet, a, kCirc, one);
    c.add_internal(kBullet, a, kCirc, one);
    c.add_call(kCirc, a, kCirc, one);
    c.add_internal(kCirc, a, kCirc, one);
    for (int p = 1; p < 5; ++p) {
      c.add_return(kPending, p, a, kPending, one);
      c.add_return(kCirc, p, a, kCirc, one);
    }
  }
  return c;
}

// States (x, w) with x a state of the parenthesizing automaton and w a
// bracket or the marker i; the latter is slot 0.
struct Core {
  Wnwa a;
  int slots = 0;
  int id(int x, int w) const { return x * slots + w; }
};

Core core_automaton(const Wpa& pa) {
  const Semiring& k = pa.semiring();
  Core c;
  c.slots = pa.num_parens() + 1;
  c.a = Wnwa(k, {});
  for (int x = 0; x < pa.num_states(); ++x)
    for (int w = 0; w < c.slots; ++w)
      c.a.add_state("(" + pa.state_name(x) + "," + (w == 0 ? std::string("i") : pa.parens()[w - 1]) + ")");
  const auto alphabet = pa.alphabet();
  for (const Symbol& s : alphabet) c.a.declare_symbol(s);
  const int n = pa.num_states();
  for (const Symbol& a : alphabet)
    for (int x1 = 0; x1 < n; ++x1)
      for (int x2 = 0; x2 < n; ++x2) {
        if (pa.is_h(x1) == pa.is_h(x2)) {
          Weight m = pa.mu(x1, a, x2);
          for (int w = 0; w < c.slots; ++w) c.a.add_internal(c.id(x1, w), a, c.id(x2, w), m);
          continue;
        }
        // x1 and x2 of opposite sorts: calls open a bracket, returns close it.
        for (int b = 0; b < pa.num_parens(); ++b) {
          Weight call = k.zero();
          Weight ret = k.zero();
          for (int y = 0; y < n; ++y) {
            if (pa.is_h(y) != pa.is_h(x2)) continue;
            call = k.add(call, k.mul(pa.open(x1, b, y), pa.mu(y, a, x2)));
          }
          for (int y = 0; y < n; ++y) {
            if (pa.is_h(y) != pa.is_h(x1)) continue;
            ret = k.add(ret, k.mul(pa.mu(x1, a, y), pa.close(y, b, x2)));
          }
          for (int w = 0; w < c.slots; ++w) c.a.add_call(c.id(x1, w), a, c.id(x2, b + 1), call);
          // Return from (x1, b) looking back at (x0, w) lands in (x2, w),
          // where x0 has the sort of x2.
          for (int x0 = 0; x0 < n; ++x0) {
            if (pa.is_h(x0) != pa.is_h(x2)) continue;
            for (int w = 0; w < c.slots; ++w) c.a.add_return(c.id(x1, b + 1), c.id(x0, w), a, c.id(x2, w), ret);
          }
        }
      }
  return c;
}

}  // namespace

Wnwa wpa_to_wnwa(const Wpa& pa) {
  const Semiring& k = pa.semiring();
  Core core = core_automaton(pa);
  Wnwa cls = classifier(k, pa.alphabet());
  Wnwa product = hadamard(core.a, cls);
  auto pid = [&](int x, int w, int c) { return core.id(x, w) * 5 + c; };
  auto hs = pa.states_of(Sort::horizontal);
  auto vs = pa.states_of(Sort::vertical);

  // Horizontal products: horizontal runs, plus vertical runs wrapping them.
  Wnwa circ = product;
  for (int h : hs) {
    circ.add_initial(pid(h, 0, kBottom), pa.lambda(h));
    circ.add_final(pid(h, 0, kCirc), pa.gamma(h));
    for (int b = 0; b < pa.num_parens(); ++b) {
      Weight in = k.zero(), out = k.zero();
      for (int v : vs) {
        in = k.add(in, k.mul(pa.lambda(v), pa.open(v, b, h)));
        out = k.add(out, k.mul(pa.close(h, b, v), pa.gamma(v)));
      }
      circ.add_initial(pid(h, b + 1, kBottom), in);
      circ.add_final(pid(h, b + 1, kCirc), out);
    }
  }

  // Vertical products (a single arc spanning the word): horizontal runs are
  // the wraps computed by the core.
  Wnwa bullet = product;
  for (int h : hs) {
    bullet.add_initial(pid(h, 0, kBottom), pa.lambda(h));
    bullet.add_final(pid(h, 0, kBullet), pa.gamma(h));
  }

  // Singletons: one transition of either sort.
  Wnwa single = product;
  for (int x = 0; x < pa.num_states(); ++x) {
    single.add_initial(pid(x, 0, kBottom), pa.lambda(x));
    single.add_final(pid(x, 0, kSingle), pa.gamma(x));
  }

  // Vertical runs on vertical products: the outer letters are read by two
  // fresh states around the core, which handles the inside.
  Wnwa outer = core.a;
  const int open = outer.add_state("open");
  const int close = outer.add_state("close");
  outer.add_initial(open, k.one());
  outer.add_final(close, k.one());
  for (const Symbol& a : pa.alphabet())
    for (int v1 : vs) {
      Weight in = k.zero(), out = k.zero();
      for (int v0 : vs) in = k.add(in, k.mul(pa.lambda(v0), pa.mu(v0, a, v1)));
      for (int vn : vs) out = k.add(out, k.mul(pa.mu(v1, a, vn), pa.gamma(vn)));
      outer.add_call(open, a, core.id(v1, 0), in);
      outer.add_return(core.id(v1, 0), open, a, close, out);
    }

  return disjoint_sum(disjoint_sum(trim(circ), trim(bullet)), disjoint_sum(trim(single), trim(outer)));
}

Wpa wnwa_to_wpa(const Wnwa& a, Sort top) {
  const Semiring& k = a.semiring();
  const auto alphabet = a.alphabet();
  // Second components: c, i, then one slot per letter.
  std::vector<std::string> tags = {"c", "i"};
  for (const Symbol& s : alphabet) tags.push_back(s);
  const int nt = static_cast<int>(tags.size());
  std::vector<std::string> hs, vs;
  for (const auto& q : a.states())
    for (const auto& t : tags) {
      hs.push_back("(" + q + "^H," + t + ")");
      vs.push_back("(" + q + "^V," + t + ")");
    }
  Wpa pa(k, hs, vs, a.states());
  for (const Symbol& s : alphabet) pa.declare_symbol(s);
  const int nh = pa.num_h();
  auto h = [&](int q, int t) { return q * nt + t; };
  auto v = [&](int q, int t) { return nh + q * nt + t; };
  const int kC = 0, kI = 1;
  std::map<Symbol, int> slot;
  for (std::size_t i = 0; i < alphabet.size(); ++i) slot[alphabet[i]] = 2 + static_cast<int>(i);

  for (const auto& [key, w] : a.internals()) {
    auto [q1, s, q2] = key;
    pa.add_mu(h(q1, kI), s, h(q2, kI), w);
    pa.add_mu(v(q1, kI), s, v(q2, kI), w);
  }
  for (const auto& [key, w] : a.calls()) {
    auto [q1, s, q2] = key;
    pa.add_mu(h(q1, kC), s, h(q2, kI), w);
    pa.add_mu(v(q1, kC), s, v(q2, kI), w);
  }
  for (int q = 0; q < a.num_states(); ++q) {
    for (const Symbol& s : alphabet) {
      pa.add_mu(h(q, kI), s, h(q, slot[s]), k.one());
      pa.add_mu(v(q, kI), s, v(q, slot[s]), k.one());
    }
    pa.add_open(h(q, kI), q, v(q, kC), k.one());
    pa.add_open(v(q, kI), q, h(q, kC), k.one());
  }
  for (const auto& [key, w] : a.returns()) {
    auto [q1, q2, s, q3] = key;
    pa.add_close(h(q1, slot[s]), q2, v(q3, kI), w);
    pa.add_close(v(q1, slot[s]), q2, h(q3, kI), w);
  }
  for (const auto& [q, w] : a.initials()) pa.add_lambda(top == Sort::horizontal ? h(q, kI) : v(q, kI), w);
  for (const auto& [q, w] : a.finals()) pa.add_gamma(top == Sort::horizontal ? h(q, kI) : v(q, kI), w);
  return pa;
}

}  // namespace nestweight
