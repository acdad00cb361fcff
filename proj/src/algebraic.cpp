#include "nestweight/algebraic.hpp"

#include <algorithm>
#include <functional>

#include "nestweight/error.hpp"
#include "nestweight/logic.hpp"
#include "nestweight/nested_word.hpp"
#include "nestweight/text.hpp"

namespace nestweight {

// ---- the system container

AlgebraicSystem::AlgebraicSystem(Semiring semiring, std::vector<Symbol> alphabet, std::vector<std::string> variables)
    : semiring_(semiring) {
  for (auto& a : alphabet) {
    if (a.empty() || a == "|") throw InputError("invalid letter '" + a + "'");
    if (!letter_set_.insert(a).second) throw InputError("letter '" + a + "' declared twice");
    alphabet_.push_back(a);
  }
  for (auto& x : variables) add_variable(x);
}

void AlgebraicSystem::add_variable(const std::string& x) {
  if (x.empty() || x == "|") throw InputError("invalid variable '" + x + "'");
  if (letter_set_.count(x)) throw InputError("'" + x + "' is both a letter and a variable");
  if (!var_set_.insert(x).second) throw InputError("variable '" + x + "' declared twice");
  variables_.push_back(x);
  polys_[x];
}

void AlgebraicSystem::add(const std::string& x, const SysWord& w, const Weight& c) {
  Polynomial& p = poly_mut(x);
  auto it = p.find(w);
  Weight v = it == p.end() ? c : semiring_.add(it->second, c);
  if (semiring_.is_zero(v)) {
    if (it != p.end()) p.erase(it);
  } else if (it == p.end()) {
    p.emplace(w, v);
  } else {
    it->second = v;
  }
}

void AlgebraicSystem::set(const std::string& x, const SysWord& w, const Weight& c) {
  Polynomial& p = poly_mut(x);
  if (semiring_.is_zero(c))
    p.erase(w);
  else
    p[w] = c;
}

const Polynomial& AlgebraicSystem::poly(const std::string& x) const {
  auto it = polys_.find(x);
  if (it == polys_.end()) throw InputError("unknown variable '" + x + "'");
  return it->second;
}

Polynomial& AlgebraicSystem::poly_mut(const std::string& x) {
  auto it = polys_.find(x);
  if (it == polys_.end()) throw InputError("unknown variable '" + x + "'");
  return it->second;
}

Weight AlgebraicSystem::coeff(const std::string& x, const SysWord& w) const {
  const Polynomial& p = poly(x);
  auto it = p.find(w);
  return it == p.end() ? semiring_.zero() : it->second;
}

bool AlgebraicSystem::is_terminal(const SysWord& w) const {
  return std::none_of(w.begin(), w.end(), [&](const std::string& s) { return is_variable(s); });
}

int AlgebraicSystem::letter_count(const SysWord& w) const {
  return static_cast<int>(std::count_if(w.begin(), w.end(), [&](const std::string& s) { return is_letter(s); }));
}

void AlgebraicSystem::validate() const {
  for (const auto& [x, p] : polys_)
    for (const auto& [w, c] : p) {
      for (const auto& s : w)
        if (!is_letter(s) && !is_variable(s))
          throw InputError("polynomial of '" + x + "' uses undeclared symbol '" + s + "'");
      if (c.kind() != semiring_.kind()) throw InputError("coefficient from a different semiring");
    }
}

// ---- classes and manipulations

SystemClass check_class(const AlgebraicSystem& sys) {
  SystemClass c{true, true, true, true};
  for (const auto& x : sys.variables())
    for (const auto& [w, coef] : sys.poly(x)) {
      if (w.empty() || (w.size() == 1 && sys.is_variable(w[0]))) c.proper = false;
      if (!w.empty() && !sys.is_letter(w[0])) c.weakly_strict = false;
      bool tail_vars = std::all_of(w.begin() + (w.empty() ? 0 : 1), w.end(),
                                   [&](const std::string& s) { return sys.is_variable(s); });
      if (w.empty() || !sys.is_letter(w[0]) || w.size() > 3 || !tail_vars) c.gnf = false;
      bool sandwich = !w.empty() && sys.is_letter(w.front()) && sys.is_letter(w.back());
      if (!sandwich) c.sandwich_normal = false;
    }
  return c;
}

namespace {

void require_weakly_strict(const AlgebraicSystem& sys, const char* what) {
  if (!check_class(sys).weakly_strict) throw InputError(std::string(what) + " needs a weakly strict system");
}

SysWord splice(const SysWord& u, size_t pos, const SysWord& z) {
  SysWord out(u.begin(), u.begin() + pos);
  out.insert(out.end(), z.begin(), z.end());
  out.insert(out.end(), u.begin() + pos + 1, u.end());
  return out;
}

void guard_size(const AlgebraicSystem& sys, const Limits& limits) {
  size_t total = 0;
  for (const auto& x : sys.variables()) total += sys.poly(x).size();
  if (total > static_cast<size_t>(limits.max_words)) throw GuardError("system support exceeds the bound");
}

}  // namespace

AlgebraicSystem substitute(const AlgebraicSystem& sys, const std::string& x, const SysWord& w, int position) {
  const Semiring& k = sys.semiring();
  Weight c = sys.coeff(x, w);
  if (k.is_zero(c)) throw InputError("word is not in the support of P_" + x);
  if (position < 0 || position >= static_cast<int>(w.size()) || !sys.is_variable(w[position]))
    throw InputError("no variable occurrence at index " + std::to_string(position));
  const std::string& y = w[position];
  Polynomial py = sys.poly(y);  // copy, y may equal x
  AlgebraicSystem out = sys;
  out.poly_mut(x).erase(w);
  for (const auto& [z, cz] : py) out.add(x, splice(w, position, z), k.mul(c, cz));
  return out;
}

AlgebraicSystem unfold(const AlgebraicSystem& sys, int k, const Limits& limits) {
  require_weakly_strict(sys, "unfold");
  AlgebraicSystem cur = sys;
  for (int round = 0;; ++round) {
    bool changed = false;
    const std::vector<std::string> vars = cur.variables();
    for (const auto& x : vars) {
      std::vector<SysWord> todo;
      for (const auto& [w, c] : cur.poly(x))
        if (!cur.is_terminal(w) && cur.letter_count(w) < k) todo.push_back(w);
      for (const auto& w : todo) {
        if (cur.poly(x).count(w) == 0) continue;
        auto it = std::find_if(w.begin(), w.end(), [&](const std::string& s) { return cur.is_variable(s); });
        cur = substitute(cur, x, w, static_cast<int>(it - w.begin()));
        changed = true;
      }
      guard_size(cur, limits);
    }
    if (!changed) return cur;
    if (round >= limits.max_unfold_rounds) throw GuardError("unfold exceeds the round bound");
  }
}

AlgebraicSystem strip_short_words(const AlgebraicSystem& sys, int kmax, const Limits& limits) {
  require_weakly_strict(sys, "strip_short_words");
  const Semiring& k = sys.semiring();
  AlgebraicSystem cur = sys;
  // Increasing length: once all shorter words are gone, the coefficient of
  // a terminal word in P_X equals that of the solution.
  for (int len = 0; len <= kmax; ++len) {
    std::vector<std::pair<std::string, SysWord>> todo;
    for (const auto& x : cur.variables())
      for (const auto& [w, c] : cur.poly(x))
        if (cur.is_terminal(w) && static_cast<int>(w.size()) == len) todo.emplace_back(x, w);
    for (const auto& [x, w] : todo) {
      Weight c = cur.coeff(x, w);
      AlgebraicSystem next = cur;
      for (const auto& y : cur.variables()) {
        for (const auto& [u, cu] : cur.poly(y)) {
          std::vector<size_t> occ;
          for (size_t i = 0; i < u.size(); ++i)
            if (u[i] == x) occ.push_back(i);
          if (occ.empty()) continue;
          if (occ.size() > 20) throw GuardError("too many occurrences to expand");
          for (std::uint32_t mask = 1; mask < (1u << occ.size()); ++mask) {
            SysWord v;
            Weight cv = cu;
            for (size_t i = 0, o = 0; i < u.size(); ++i) {
              if (o < occ.size() && occ[o] == i) {
                if (mask >> o & 1) {
                  v.insert(v.end(), w.begin(), w.end());
                  cv = k.mul(cv, c);
                } else {
                  v.push_back(u[i]);
                }
                ++o;
              } else {
                v.push_back(u[i]);
              }
            }
            next.add(y, v, cv);
          }
        }
      }
      next.set(x, w, k.zero());
      cur = std::move(next);
      guard_size(cur, limits);
    }
  }
  return cur;
}

// ---- solving

SystemSolver::SystemSolver(const AlgebraicSystem& sys) : sys_(sys) {
  SystemClass c = check_class(sys);
  if (!c.proper && !c.weakly_strict)
    throw InputError("system is neither proper nor weakly strict; its solution need not be unique");
  sys.validate();
  for (size_t i = 0; i < sys.variables().size(); ++i) var_index_[sys.variables()[i]] = static_cast<int>(i);
}

std::map<std::string, Weight> SystemSolver::solve(const Word& w) {
  const Semiring& k = sys_.semiring();
  const int n = static_cast<int>(w.size());
  const int m = static_cast<int>(sys_.variables().size());
  for (const auto& a : w)
    if (!sys_.is_letter(a)) throw InputError("letter '" + a + "' is not in the alphabet");
  // t[i][j][x]: coefficient of S_x at w[i..j)
  std::vector<std::vector<std::vector<Weight>>> t(
      n + 1, std::vector<std::vector<Weight>>(n + 1, std::vector<Weight>(m, k.zero())));
  for (int len = 0; len <= n; ++len) {
    for (int i = 0; i + len <= n; ++i) {
      const int j = i + len;
      for (int xi = 0; xi < m; ++xi) {
        Weight acc = k.zero();
        for (const auto& [u, c] : sys_.poly(sys_.variables()[xi])) {
          // reach[p]: weight of matching a prefix of u onto w[i..p)
          std::vector<Weight> reach(n + 1, k.zero());
          reach[i] = k.one();
          for (const auto& s : u) {
            std::vector<Weight> next(n + 1, k.zero());
            bool any = false;
            if (sys_.is_letter(s)) {
              for (int p = i; p < j; ++p)
                if (!k.is_zero(reach[p]) && w[p] == s) {
                  next[p + 1] = k.add(next[p + 1], reach[p]);
                  any = true;
                }
            } else {
              int yi = var_index_.at(s);
              for (int p = i; p <= j; ++p) {
                if (k.is_zero(reach[p])) continue;
                for (int q = p; q <= j; ++q) {
                  if (p == i && q == j) continue;  // never needed for these classes
                  const Weight& v = t[p][q][yi];
                  if (k.is_zero(v)) continue;
                  next[q] = k.add(next[q], k.mul(reach[p], v));
                  any = true;
                }
              }
            }
            reach = std::move(next);
            if (!any) break;
          }
          if (!k.is_zero(reach[j])) acc = k.add(acc, k.mul(c, reach[j]));
        }
        t[i][j][xi] = acc;
      }
    }
  }
  std::map<std::string, Weight> out;
  for (int xi = 0; xi < m; ++xi) out.emplace(sys_.variables()[xi], t[0][n][xi]);
  return out;
}

Weight SystemSolver::coefficient(const std::string& x, const Word& w) {
  if (!sys_.is_variable(x)) throw InputError("unknown variable '" + x + "'");
  return solve(w).at(x);
}

Weight coefficient(const AlgebraicSystem& sys, const std::string& x, const Word& w) {
  return SystemSolver(sys).coefficient(x, w);
}

std::map<Word, Weight> solve_coefficients(const AlgebraicSystem& sys, const std::string& x, int max_len,
                                          const Limits& limits) {
  if (!sys.is_variable(x)) throw InputError("unknown variable '" + x + "'");
  SystemSolver solver(sys);
  std::map<Word, Weight> out;
  std::size_t budget = static_cast<std::size_t>(limits.max_words);
  for (int n = 0; n <= max_len; ++n) {
    for (const Word& w : enumerate_words(sys.alphabet(), n, budget)) {
      Weight c = solver.coefficient(x, w);
      if (!sys.semiring().is_zero(c)) out.emplace(w, c);
    }
  }
  return out;
}

// ---- derivation trees

namespace {

class TreeEnumerator {
 public:
  TreeEnumerator(const AlgebraicSystem& sys, const Word& u, const Limits& limits)
      : sys_(sys), u_(u), limits_(limits) {}

  const std::vector<DerivationTree>& trees(const std::string& x, int i, int j) {
    auto key = std::make_tuple(x, i, j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<DerivationTree> out;
    for (const auto& [w, c] : sys_.poly(x)) {
      expand(w, 0, i, j, i, j, {}, out, x);
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  // Assign spans to the symbols of w from index s on, starting at position p.
  void expand(const SysWord& w, size_t s, int p, int j, int i0, int j0, std::vector<DerivationTree> kids,
              std::vector<DerivationTree>& out, const std::string& x) {
    if (s == w.size()) {
      if (p != j) return;
      out.push_back(DerivationTree{x, w, std::move(kids)});
      if (++count_ > limits_.max_trees) throw GuardError("derivation tree enumeration exceeds the bound");
      return;
    }
    const std::string& sym = w[s];
    if (sys_.is_letter(sym)) {
      if (p < j && u_[p] == sym) {
        kids.push_back(DerivationTree{"", {sym}, {}});
        expand(w, s + 1, p + 1, j, i0, j0, std::move(kids), out, x);
      }
      return;
    }
    for (int q = p + 1; q <= j; ++q) {
      if (p == i0 && q == j0) continue;
      const auto& sub = trees(sym, p, q);
      for (const auto& t : sub) {
        auto k2 = kids;
        k2.push_back(t);
        expand(w, s + 1, q, j, i0, j0, std::move(k2), out, x);
      }
    }
  }

  const AlgebraicSystem& sys_;
  const Word& u_;
  const Limits& limits_;
  std::uint64_t count_ = 0;
  std::map<std::tuple<std::string, int, int>, std::vector<DerivationTree>> memo_;
};

}  // namespace

std::vector<DerivationTree> derivation_trees(const AlgebraicSystem& sys, const std::string& x, const Word& u,
                                             const Limits& limits) {
  if (!check_class(sys).proper) throw InputError("derivation trees need a proper system");
  if (!sys.is_variable(x)) throw InputError("unknown variable '" + x + "'");
  sys.validate();
  if (u.empty()) return {};
  TreeEnumerator e(sys, u, limits);
  return e.trees(x, 0, static_cast<int>(u.size()));
}

Weight tree_weight(const AlgebraicSystem& sys, const DerivationTree& t) {
  const Semiring& k = sys.semiring();
  if (t.is_leaf()) return k.one();
  Weight w = sys.coeff(t.variable, t.word);
  for (const auto& c : t.children) w = k.mul(w, tree_weight(sys, c));
  return w;
}

std::string tree_to_string(const DerivationTree& t) {
  if (t.is_leaf()) return t.word.empty() ? "" : t.word[0];
  std::string s = t.variable + "(";
  for (size_t i = 0; i < t.children.size(); ++i) {
    if (i) s += " ";
    s += tree_to_string(t.children[i]);
  }
  return s + ")";
}

// ---- automata to systems and back

namespace {

std::string fresh_symbol(const std::string& base, const AlgebraicSystem& sys) {
  std::set<std::string> taken(sys.alphabet().begin(), sys.alphabet().end());
  taken.insert(sys.variables().begin(), sys.variables().end());
  return fresh_name(base, taken);
}

}  // namespace

SystemWithStart wnwa_to_system(const Wnwa& a) {
  const Semiring& k = a.semiring();
  const int n = a.num_states();
  std::vector<Symbol> alpha = a.alphabet();
  std::set<std::string> letters(alpha.begin(), alpha.end());
  std::vector<std::vector<std::string>> name(n, std::vector<std::string>(n));
  std::vector<std::string> vars;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      std::string v = "(" + a.states()[p] + "," + a.states()[q] + ")";
      while (letters.count(v)) v += "'";
      name[p][q] = v;
      vars.push_back(v);
    }
  AlgebraicSystem sys(k, alpha, vars);
  auto V = [&](int p, int q) { return name[p][q]; };

  // Returns grouped by lookback state.
  std::map<int, std::vector<std::pair<Wnwa::RetKey, Weight>>> ret_by_look;
  for (const auto& e : a.returns()) ret_by_look[std::get<1>(e.first)].push_back(e);

  for (int q = 0; q < n; ++q) sys.add(V(q, q), {}, k.one());
  for (const auto& [key, w] : a.internals()) {
    auto [p, s, q] = key;
    sys.add(V(p, q), {s}, w);
  }
  // a (q3,q4) b
  for (const auto& [k1, w1] : a.internals())
    for (const auto& [k2, w2] : a.internals()) {
      auto [q1, sa, q3] = k1;
      auto [q4, sb, q2] = k2;
      sys.add(V(q1, q2), {sa, V(q3, q4), sb}, k.mul(w1, w2));
    }
  for (const auto& [kc, wc] : a.calls()) {
    auto [q1, sa, q3] = kc;
    for (const auto& [kr, wr] : ret_by_look[q1]) {
      auto [q4, look, sb, q2] = kr;
      sys.add(V(q1, q2), {sa, V(q3, q4), sb}, k.mul(wc, wr));
    }
  }
  // a (q3,q4) b (q5,q6) c, call-return then internal
  for (const auto& [kc, wc] : a.calls()) {
    auto [q1, sa, q3] = kc;
    for (const auto& [kr, wr] : ret_by_look[q1]) {
      auto [q4, look, sb, q5] = kr;
      for (const auto& [ki, wi] : a.internals()) {
        auto [q6, sc, q2] = ki;
        sys.add(V(q1, q2), {sa, V(q3, q4), sb, V(q5, q6), sc}, k.mul(k.mul(wc, wr), wi));
      }
    }
  }
  // internal then call-return
  for (const auto& [ki, wi] : a.internals()) {
    auto [q1, sa, q3] = ki;
    for (const auto& [kc, wc] : a.calls()) {
      auto [q4, sb, q5] = kc;
      for (const auto& [kr, wr] : ret_by_look[q4]) {
        auto [q6, look, sc, q2] = kr;
        sys.add(V(q1, q2), {sa, V(q3, q4), sb, V(q5, q6), sc}, k.mul(k.mul(wi, wc), wr));
      }
    }
  }
  // a (q3,q4) b (q5,q6) c (q7,q8) d
  for (const auto& [kc1, wc1] : a.calls()) {
    auto [q1, sa, q3] = kc1;
    for (const auto& [kr1, wr1] : ret_by_look[q1]) {
      auto [q4, l1, sb, q5] = kr1;
      Weight w12 = k.mul(wc1, wr1);
      for (const auto& [kc2, wc2] : a.calls()) {
        auto [q6, sc, q7] = kc2;
        for (const auto& [kr2, wr2] : ret_by_look[q6]) {
          auto [q8, l2, sd, q2] = kr2;
          sys.add(V(q1, q2), {sa, V(q3, q4), sb, V(q5, q6), sc, V(q7, q8), sd}, k.mul(k.mul(w12, wc2), wr2));
        }
      }
    }
  }
  std::string start = fresh_symbol("S", sys);
  sys.add_variable(start);
  for (const auto& [p, wi] : a.initials())
    for (const auto& [q, wf] : a.finals()) {
      Weight f = k.mul(wi, wf);
      for (const auto& [w, c] : sys.poly(V(p, q))) sys.add(start, w, k.mul(f, c));
    }
  return {std::move(sys), start};
}

Wnwa gnf_to_wnwa(const AlgebraicSystem& sys, const std::string& y) {
  if (!check_class(sys).gnf) throw InputError("gnf_to_wnwa needs a system in Greibach normal form");
  if (!sys.is_variable(y)) throw InputError("unknown variable '" + y + "'");
  sys.validate();
  const Semiring& k = sys.semiring();
  const auto& xs = sys.variables();
  const int m = static_cast<int>(xs.size());
  const int bot = m;  // index of the bottom symbol
  std::string bot_name = "_";
  while (sys.is_variable(bot_name)) bot_name += "_";
  auto comp = [&](int i) { return i == bot ? bot_name : xs[i]; };
  std::vector<std::string> names;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) names.push_back("(" + comp(i) + "," + comp(j) + ")");
  Wnwa a(k, names);
  for (const auto& s : sys.alphabet()) a.declare_symbol(s);
  auto st = [&](int i, int j) { return i * (m + 1) + j; };
  std::map<std::string, int> idx;
  for (int i = 0; i < m; ++i) idx[xs[i]] = i;

  for (int x1 = 0; x1 < m; ++x1) {
    for (const auto& [w, c] : sys.poly(xs[x1])) {
      const std::string& s = w[0];
      if (w.size() == 3) {
        int x3 = idx.at(w[1]), x4 = idx.at(w[2]);
        for (int x2 = 0; x2 <= m; ++x2) a.add_call(st(x1, x4), s, st(x3, x2), c);
      } else if (w.size() == 2) {
        int x3 = idx.at(w[1]);
        for (int x2 = 0; x2 <= m; ++x2) a.add_internal(st(x1, x2), s, st(x3, x2), c);
      } else {
        for (int x2 = 0; x2 <= m; ++x2)
          for (int x3 = 0; x3 < m; ++x3)
            for (int x4 = 0; x4 < m; ++x4) a.add_return(st(x1, x2), st(x3, x4), s, st(x4, x2), c);
        a.add_internal(st(x1, bot), s, st(bot, bot), c);
      }
    }
  }
  int yi = idx.at(y);
  for (int z = 0; z <= m; ++z) a.add_initial(st(yi, z), k.one());
  a.add_final(st(bot, bot), k.one());
  return a;
}

SystemWithStart wpa_to_system(const Wpa& a) {
  const Semiring& k = a.semiring();
  std::vector<Symbol> alpha = a.alphabet();
  std::set<std::string> letters(alpha.begin(), alpha.end());
  const int n = a.num_states();
  auto var = [&](int p, int q, int bit) {
    std::string v = "(" + a.state_name(p) + "," + a.state_name(q) + "," + std::to_string(bit) + ")";
    while (letters.count(v)) v += "'";
    return v;
  };
  std::vector<std::string> vars;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (a.is_h(p) == a.is_h(q))
        for (int bit : {0, 1}) vars.push_back(var(p, q, bit));
  AlgebraicSystem sys(k, alpha, vars);

  // The sequence polynomial of (r, r', 0), used inline.
  auto seq_poly = [&](int r, int r2) {
    Polynomial p;
    for (int r3 : a.states_of(a.sort_of(r))) {
      p[{var(r, r3, 1), var(r3, r2, 1)}] = k.one();
      p[{var(r, r3, 1), var(r3, r2, 0)}] = k.one();
    }
    return p;
  };
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (a.is_h(p) != a.is_h(q)) continue;
      for (const auto& [w, c] : seq_poly(p, q)) sys.add(var(p, q, 0), w, c);
    }
  for (const auto& [key, w] : a.mus()) {
    auto [p, s, q] = key;
    sys.add(var(p, q, 1), {s}, w);
  }
  for (const auto& [ko, wo] : a.opens()) {
    auto [p, s, r] = ko;
    for (const auto& [kc, wc] : a.closes()) {
      auto [r2, s2, q] = kc;
      if (s2 != s || a.is_h(r2) != a.is_h(r)) continue;
      Weight f = k.mul(wo, wc);
      for (const auto& [w, c] : seq_poly(r, r2)) sys.add(var(p, q, 1), w, k.mul(f, c));
    }
  }
  std::string start = fresh_symbol("S", sys);
  sys.add_variable(start);
  for (const auto& [p, wl] : a.lambdas())
    for (const auto& [q, wg] : a.gammas()) {
      if (a.is_h(p) != a.is_h(q)) continue;
      Weight f = k.mul(wl, wg);
      for (int bit : {0, 1})
        for (const auto& [w, c] : sys.poly(var(p, q, bit))) sys.add(start, w, k.mul(f, c));
    }
  return {std::move(sys), start};
}

Weight project_nw_series(const Wnwa& a, const Word& w, const Limits& limits) {
  if (w.empty()) throw InputError("projection needs a nonempty word");
  const Semiring& k = a.semiring();
  WnwaEvaluator ev(a);
  Weight acc = k.zero();
  for (const auto& arcs : enumerate_nestings(static_cast<int>(w.size()), limits))
    acc = k.add(acc, ev(NestedWord(w, arcs)));
  return acc;
}

Weight project_text_series(const Wpa& a, const Word& w, const Limits& limits) {
  if (w.empty()) throw InputError("projection needs a nonempty word");
  const Semiring& k = a.semiring();
  Weight acc = k.zero();
  for (const Text& t : enumerate_texts(w, limits)) acc = k.add(acc, wpa_behavior(a, t));
  return acc;
}

// ---- patterns and the first-order sentence

SysWord pattern(const AlgebraicSystem& sys, const SysWord& w) {
  SysWord p;
  for (const auto& s : w) p.push_back(sys.is_variable(s) ? "|" : s);
  return p;
}

bool patterns_disjoint(const AlgebraicSystem& sys) {
  std::map<SysWord, std::string> owner;
  for (const auto& x : sys.variables())
    for (const auto& [w, c] : sys.poly(x)) {
      if (sys.is_terminal(w)) continue;
      auto [it, fresh] = owner.emplace(pattern(sys, w), x);
      if (!fresh && it->second != x) return false;
    }
  return true;
}

namespace {

class SrfoBuilder {
 public:
  explicit SrfoBuilder(const AlgebraicSystem& sys) : sys_(sys), k_(sys.semiring()) {}

  Formula sentence(const std::string& y) {
    std::string x = fresh("x"), yv = fresh("y");
    Formula root = exists(x, conj(min_pos(x), exists(yv, conj({edge(x, yv), max_pos(yv), kind(y, x, yv)}))));
    std::string z = fresh("z"), z2 = fresh("z");
    std::vector<Formula> shapes{neg(edge(z, z2)), neg(call_between(z, z2))};
    for (const auto& v : sys_.variables())
      for (const auto& [w, c] : sys_.poly(v))
        if (!sys_.is_terminal(w))
          shapes.push_back(fits(w, z, z2, [&](size_t, const std::string& s, auto p, auto q) { return kind(s, p, q); }));
    Formula psi = conj(root, forall(z, forall(z2, disj(shapes))));

    std::string u = fresh("x"), uv = fresh("y");
    std::vector<Formula> parts{disambiguate_minus(is_call(u))};
    Formula top = conj(min_pos(u), max_pos(uv));
    parts.push_back(disambiguate_plus(exists(uv, conj({edge(u, uv), neg(call_between(u, uv)), neg(top)}))));
    for (const auto& [w, c] : sys_.poly(y))
      if (sys_.is_terminal(w))
        parts.push_back(
            conj(disambiguate_plus(exists(uv, conj({edge(u, uv), top, theta(w, u, uv)}))), k(k_.format(c))));
    for (const auto& v : sys_.variables())
      for (const auto& [w, c] : sys_.poly(v)) {
        if (sys_.is_terminal(w)) continue;
        for (const auto& [choice, weight] : choices(w)) {
          Formula node = fits(w, u, uv, [&](size_t i, const std::string& s, auto p, auto q) {
            const SysWord* t = choice.at(i);
            if (t) return theta(*t, p, q);
            return slot_decided(v, w, i) ? call_between(p, q) : nonterminal_kind(s, p, q);
          });
          parts.push_back(
              conj(disambiguate_plus(exists(uv, conj(edge(u, uv), node))), k(k_.format(k_.mul(c, weight)))));
        }
      }
    return conj(disambiguate_plus(psi), forall(u, disj(parts)));
  }

 private:
  using Slot = std::function<Formula(size_t, const std::string&, const std::string&, const std::string&)>;

  std::string fresh(const std::string& base) { return base + std::to_string(++counter_); }

  Formula falsum() { return neg(verum()); }

  Formula succ(const std::string& a, const std::string& b) {
    std::string z = fresh("s");
    return conj(lt(a, b), neg(exists(z, conj(lt(a, z), lt(z, b)))));
  }

  Formula call_between(const std::string& a, const std::string& b) {
    std::string z = fresh("c");
    return exists(z, conj({lt(a, z), lt(z, b), is_call(z)}));
  }

  // The arc (x, y) spells w: letters in the gaps carry no call, each
  // variable occurrence is a surface arc satisfying the slot formula.
  Formula fits(const SysWord& w, const std::string& x, const std::string& y, const Slot& slot) {
    return conj({lab(w.front(), x), lab(w.back(), y), chain(w, 1, x, y, slot)});
  }

  Formula chain(const SysWord& w, size_t i, const std::string& prev, const std::string& y, const Slot& slot) {
    if (i + 1 == w.size()) return succ(prev, y);
    const std::string& s = w[i];
    std::string p = fresh("p");
    if (!sys_.is_variable(s) && s != "|")
      return exists(p, conj({succ(prev, p), lab(s, p), neg(is_call(p)), chain(w, i + 1, p, y, slot)}));
    std::string q = fresh("q");
    Formula cond = slot(i, s, p, q);
    Formula rest = chain(w, i + 1, q, y, slot);
    Formula inner = cond ? conj({edge(p, q), cond, rest}) : conj(edge(p, q), rest);
    return exists(p, conj(succ(prev, p), exists(q, inner)));
  }

  Formula theta(const SysWord& w, const std::string& x, const std::string& y) {
    return fits(w, x, y, [](size_t, const std::string&, auto, auto) -> Formula { return nullptr; });
  }

  // The arc is a non-terminal node whose pattern belongs to v.
  Formula pattern_kind(const std::string& v, const std::string& p, const std::string& q) {
    std::set<SysWord> pats;
    for (const auto& [w, c] : sys_.poly(v))
      if (!sys_.is_terminal(w)) pats.insert(pattern(sys_, w));
    std::vector<Formula> alts;
    for (const auto& pt : pats)
      alts.push_back(fits(pt, p, q, [](size_t, const std::string&, auto, auto) -> Formula { return nullptr; }));
    if (alts.empty()) return falsum();
    return disj(alts);
  }

  // Every arc with an inner arc is checked against some pattern anyway, so
  // when v owns all non-terminal words a call inside is enough.
  Formula nonterminal_kind(const std::string& v, const std::string& p, const std::string& q) {
    bool owns_all = true;
    bool has_any = false;
    for (const auto& x : sys_.variables())
      for (const auto& [w, c] : sys_.poly(x))
        if (!sys_.is_terminal(w)) {
          if (x != v) owns_all = false;
          else has_any = true;
        }
    if (!has_any) return falsum();
    return owns_all ? call_between(p, q) : pattern_kind(v, p, q);
  }

  // The arc is a node labelled v.
  Formula kind(const std::string& v, const std::string& p, const std::string& q) {
    std::vector<Formula> alts{nonterminal_kind(v, p, q)};
    for (const auto& [w, c] : sys_.poly(v))
      if (sys_.is_terminal(w)) alts.push_back(theta(w, p, q));
    return disj(alts);
  }

  // Whether slot i of w holds the same variable in every word of v with the
  // pattern of w; then a non-terminal child needs no further test.
  bool slot_decided(const std::string& v, const SysWord& w, size_t i) {
    SysWord pw = pattern(sys_, w);
    for (const auto& [u, c] : sys_.poly(v))
      if (!sys_.is_terminal(u) && pattern(sys_, u) == pw && u[i] != w[i]) return false;
    return true;
  }

  // Every way to resolve the slots of w: a terminal child word (with its
  // coefficient) or a non-terminal child.
  std::vector<std::pair<std::map<size_t, const SysWord*>, Weight>> choices(const SysWord& w) {
    std::vector<std::pair<std::map<size_t, const SysWord*>, Weight>> out{{{}, k_.one()}};
    for (size_t i = 0; i < w.size(); ++i) {
      if (!sys_.is_variable(w[i])) continue;
      std::vector<std::pair<std::map<size_t, const SysWord*>, Weight>> next;
      for (const auto& [m, wt] : out) {
        auto m2 = m;
        m2[i] = nullptr;
        next.emplace_back(m2, wt);
        for (const auto& [t, c] : sys_.poly(w[i])) {
          if (!sys_.is_terminal(t)) continue;
          auto m3 = m;
          m3[i] = &t;
          next.emplace_back(m3, k_.mul(wt, c));
        }
      }
      out = std::move(next);
    }
    return out;
  }

  const AlgebraicSystem& sys_;
  const Semiring& k_;
  int counter_ = 0;
};

}  // namespace

SrfoResult system_to_srfo(const AlgebraicSystem& sys, const std::string& y, std::vector<std::string> order,
                          const Limits& limits) {
  if (!sys.is_variable(y)) throw InputError("unknown variable '" + y + "'");
  sys.validate();
  if (!check_class(sys).sandwich_normal)
    throw InputError("system_to_srfo needs supports of single letters or words that start and end with a letter");
  if (order.empty()) order = sys.variables();
  if (std::set<std::string>(order.begin(), order.end()) != std::set<std::string>(sys.variables().begin(), sys.variables().end()) ||
      order.size() != sys.variables().size())
    throw InputError("variable order must list every variable once");

  AlgebraicSystem cur = strip_short_words(sys, 1, limits);
  std::set<SysWord> earlier;
  for (const auto& x : order) {
    for (int rounds = 0;; ++rounds) {
      const SysWord* clash = nullptr;
      for (const auto& [w, c] : cur.poly(x))
        if (!cur.is_terminal(w) && earlier.count(pattern(cur, w))) {
          clash = &w;
          break;
        }
      if (!clash) break;
      if (rounds >= limits.max_unfold_rounds) throw GuardError("pattern separation exceeds the unfold bound");
      SysWord w = *clash;
      auto it = std::find_if(w.begin(), w.end(), [&](const std::string& s) { return cur.is_variable(s); });
      cur = substitute(cur, x, w, static_cast<int>(it - w.begin()));
      guard_size(cur, limits);
    }
    for (const auto& [w, c] : cur.poly(x))
      if (!cur.is_terminal(w)) earlier.insert(pattern(cur, w));
  }
  SrfoBuilder b(cur);
  return {b.sentence(y), std::move(cur)};
}

// ---- JSON

AlgebraicSystem system_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("system must be a JSON object");
  for (const char* f : {"semiring", "alphabet", "variables", "polys"})
    if (!j.contains(f)) throw InputError(std::string("system: missing field '") + f + "'");
  if (!j.at("semiring").is_string()) throw InputError("system: semiring must be a string");
  Semiring k = Semiring::from_name(j.at("semiring").get<std::string>());
  auto strings = [](const Json& a, const char* what) {
    if (!a.is_array()) throw InputError(std::string("system: ") + what + " must be an array");
    std::vector<std::string> out;
    for (const auto& s : a) {
      if (!s.is_string()) throw InputError(std::string("system: ") + what + " entries must be strings");
      out.push_back(s.get<std::string>());
    }
    return out;
  };
  AlgebraicSystem sys(k, strings(j.at("alphabet"), "alphabet"), strings(j.at("variables"), "variables"));
  const Json& polys = j.at("polys");
  if (!polys.is_object()) throw InputError("system: polys must be an object");
  for (const auto& [x, terms] : polys.items()) {
    if (!sys.is_variable(x)) throw InputError("system: polynomial for undeclared variable '" + x + "'");
    if (!terms.is_array()) throw InputError("system: polynomial of '" + x + "' must be an array");
    for (const auto& t : terms) {
      if (!t.is_object() || !t.contains("word")) throw InputError("system: term of '" + x + "' needs a word");
      SysWord w = t.at("word").is_string() && t.at("word").get<std::string>().empty()
                      ? SysWord{}
                      : word_from_json(t.at("word"));
      std::string tok = "1";
      if (t.contains("coeff")) {
        const Json& c = t.at("coeff");
        if (c.is_string())
          tok = c.get<std::string>();
        else if (c.is_number_integer())
          tok = std::to_string(c.get<long long>());
        else
          throw InputError("system: coefficient must be a token");
      }
      sys.add(x, w, k.parse(tok));
    }
  }
  sys.validate();
  return sys;
}

Json system_to_json(const AlgebraicSystem& sys) {
  Json j;
  j["semiring"] = std::string(sys.semiring().name());
  j["alphabet"] = sys.alphabet();
  j["variables"] = sys.variables();
  Json polys = Json::object();
  for (const auto& x : sys.variables()) {
    Json terms = Json::array();
    for (const auto& [w, c] : sys.poly(x)) {
      Json word = Json::array();
      for (const auto& s : w) word.push_back(s);
      terms.push_back({{"word", word}, {"coeff", sys.semiring().format(c)}});
    }
    polys[x] = terms;
  }
  j["polys"] = polys;
  return j;
}

}  // namespace nestweight
