#include "nestweight/logic.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "nestweight/error.hpp"

namespace nestweight {

Signature signature_from_name(const std::string& name) {
  if (name == "nested") return Signature::nested;
  if (name == "text") return Signature::text;
  throw InputError("unknown signature '" + name + "' (expected nested or text)");
}

const char* signature_name(Signature s) { return s == Signature::nested ? "nested" : "text"; }

Structure::Structure(Signature sig, Word labels, const std::vector<std::pair<int, int>>& edges)
    : sig_(sig), labels_(std::move(labels)) {
  size_t n = labels_.size();
  edges_.assign((n + 1) * (n + 1), 0);
  for (auto [i, j] : edges) {
    if (i < 1 || j < 1 || static_cast<size_t>(i) > n || static_cast<size_t>(j) > n)
      throw InputError("edge (" + std::to_string(i) + "," + std::to_string(j) + ") outside 1.." + std::to_string(n));
    edges_[static_cast<size_t>(i) * (n + 1) + j] = 1;
  }
}

Structure Structure::of(const NestedWord& nw) {
  std::vector<std::pair<int, int>> e;
  for (const Arc& a : nw.arcs()) e.emplace_back(a.call, a.ret);
  return Structure(Signature::nested, nw.letters(), e);
}

Structure Structure::of(const Text& t) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= t.size(); ++i)
    for (int j = 1; j <= t.size(); ++j)
      if (t.leq2(i, j)) e.emplace_back(i, j);
  return Structure(Signature::text, t.labels(), e);
}

std::optional<NestedWord> Structure::as_nested_word() const {
  std::vector<Arc> arcs;
  for (int i = 1; i <= size(); ++i)
    for (int j = 1; j <= size(); ++j)
      if (edge(i, j)) {
        if (i >= j) return std::nullopt;
        arcs.push_back({i, j});
      }
  try {
    return NestedWord(labels_, arcs);
  } catch (const InputError&) {
    return std::nullopt;
  }
}

std::optional<Text> Structure::as_text() const {
  int n = size();
  std::vector<int> below(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    if (!edge(i, i)) return std::nullopt;
    for (int j = 1; j <= n; ++j) {
      if (i != j && edge(i, j) == edge(j, i)) return std::nullopt;
      if (edge(j, i)) ++below[i];
      for (int k = 1; k <= n; ++k)
        if (edge(i, j) && edge(j, k) && !edge(i, k)) return std::nullopt;
    }
  }
  std::vector<int> order(n);
  for (int i = 1; i <= n; ++i) order[below[i] - 1] = i;
  if (!is_alternating(order)) return std::nullopt;
  return Text(labels_, order);
}

namespace {

struct CNode {
  Op op = Op::constant;
  int s1 = -1;
  int s2 = -1;
  Weight w;
  std::vector<char> mask;  // label positions
  int l = -1;
  int r = -1;
};

// The formula compiled against one structure: variables become slots,
// first-order slots hold a position and second-order slots a bit set.
class Machine {
 public:
  Machine(const Formula& f, const Structure& s, const Assignment& g, const Semiring* sr, const Limits& limits)
      : s_(s), sr_(sr) {
    n_ = s.size();
    std::map<std::string, int> scope;
    for (const std::string& v : free_vars(f)) {
      auto it = g.find(v);
      if (it == g.end()) throw InputError("unbound variable '" + v + "'");
      int slot = new_slot();
      scope[v] = slot;
      for (int p : it->second)
        if (p < 1 || p > n_) throw InputError("assignment of '" + v + "' has position outside 1.." + std::to_string(n_));
      if (is_first_order_name(v)) {
        if (it->second.size() != 1) throw InputError("first-order variable '" + v + "' needs exactly one position");
        vals_[slot] = static_cast<std::uint64_t>(*it->second.begin());
      } else {
        if (n_ > 63 && !it->second.empty()) throw InputError("set variables need at most 63 positions");
        std::uint64_t m = 0;
        for (int p : it->second) m |= std::uint64_t{1} << (p - 1);
        vals_[slot] = m;
      }
    }
    root_ = compile(f, scope);
    if (uses_sets_ && n_ > limits.max_set_domain)
      throw GuardError("set quantification over " + std::to_string(n_) + " positions exceeds the bound " +
                       std::to_string(limits.max_set_domain));
    if (sr_) {
      zero_ = sr_->zero();
      one_ = sr_->one();
    }
  }

  Weight weighted() { return wev(root_); }
  bool boolean() { return bev(root_); }

 private:
  int new_slot() {
    vals_.push_back(0);
    return static_cast<int>(vals_.size()) - 1;
  }

  int compile(const Formula& f, std::map<std::string, int>& scope) {
    CNode c;
    c.op = f->op;
    auto slot = [&](const std::string& v) {
      auto it = scope.find(v);
      if (it == scope.end()) throw InputError("unbound variable '" + v + "'");
      return it->second;
    };
    switch (f->op) {
      case Op::constant:
        if (!sr_) throw InputError("weight constant in a classical formula");
        c.w = sr_->parse(f->token);
        break;
      case Op::lab:
        c.s1 = slot(f->b);
        c.mask.assign(n_ + 1, 0);
        for (int i = 1; i <= n_; ++i) c.mask[i] = s_.label(i) == f->a;
        break;
      case Op::eq:
      case Op::leq:
      case Op::edge:
      case Op::in:
        c.s1 = slot(f->a);
        c.s2 = slot(f->b);
        if (f->op == Op::in) {
          uses_sets_ = true;
          if (n_ > 63) throw InputError("set variables need at most 63 positions");
        }
        break;
      case Op::neg:
        if (sr_ && !is_atom(f->left->op)) throw InputError("weighted formulas negate atoms only");
        c.l = compile(f->left, scope);
        break;
      case Op::conj:
      case Op::disj:
        c.l = compile(f->left, scope);
        c.r = compile(f->right, scope);
        break;
      default: {
        if (f->op == Op::exists2 || f->op == Op::forall2) uses_sets_ = true;
        c.s1 = new_slot();
        auto old = scope.find(f->a);
        std::optional<int> saved;
        if (old != scope.end()) saved = old->second;
        scope[f->a] = c.s1;
        c.l = compile(f->left, scope);
        if (saved) scope[f->a] = *saved;
        else scope.erase(f->a);
      }
    }
    nodes_.push_back(std::move(c));
    return static_cast<int>(nodes_.size()) - 1;
  }

  bool atom(const CNode& c) const {
    std::uint64_t a = vals_[c.s1];
    switch (c.op) {
      case Op::lab: return c.mask[a] != 0;
      case Op::eq: return a == vals_[c.s2];
      case Op::leq: return a <= vals_[c.s2];
      case Op::edge: return s_.edge(static_cast<int>(a), static_cast<int>(vals_[c.s2]));
      case Op::in: return (vals_[c.s2] >> (a - 1)) & 1;
      default: return false;
    }
  }

  std::uint64_t range(Op op) const {
    if (op == Op::exists1 || op == Op::forall1) return static_cast<std::uint64_t>(n_);
    return std::uint64_t{1} << n_;
  }

  Weight wev(int id) {
    const CNode& c = nodes_[id];
    switch (c.op) {
      case Op::constant:
        return c.w;
      case Op::neg:
        return atom(nodes_[c.l]) ? zero_ : one_;
      case Op::conj: {
        Weight a = wev(c.l);
        if (sr_->is_zero(a)) return a;
        Weight b = wev(c.r);
        return sr_->mul(a, b);
      }
      case Op::disj:
        return sr_->add(wev(c.l), wev(c.r));
      case Op::exists1:
      case Op::exists2: {
        Weight acc = zero_;
        std::uint64_t lo = c.op == Op::exists1 ? 1 : 0, hi = range(c.op) + (c.op == Op::exists1 ? 1 : 0);
        for (std::uint64_t v = lo; v < hi; ++v) {
          vals_[c.s1] = v;
          acc = sr_->add(acc, wev(c.l));
        }
        return acc;
      }
      case Op::forall1:
      case Op::forall2: {
        Weight acc = one_;
        std::uint64_t lo = c.op == Op::forall1 ? 1 : 0, hi = range(c.op) + (c.op == Op::forall1 ? 1 : 0);
        for (std::uint64_t v = lo; v < hi; ++v) {
          vals_[c.s1] = v;
          Weight b = wev(c.l);
          if (sr_->is_zero(b)) return b;
          acc = sr_->mul(acc, b);
        }
        return acc;
      }
      default:
        return atom(c) ? one_ : zero_;
    }
  }

  bool bev(int id) {
    const CNode& c = nodes_[id];
    switch (c.op) {
      case Op::neg:
        return !bev(c.l);
      case Op::conj:
        return bev(c.l) && bev(c.r);
      case Op::disj:
        return bev(c.l) || bev(c.r);
      case Op::exists1:
      case Op::exists2:
      case Op::forall1:
      case Op::forall2: {
        bool ex = c.op == Op::exists1 || c.op == Op::exists2;
        bool first = c.op == Op::exists1 || c.op == Op::forall1;
        std::uint64_t lo = first ? 1 : 0, hi = range(c.op) + (first ? 1 : 0);
        for (std::uint64_t v = lo; v < hi; ++v) {
          vals_[c.s1] = v;
          if (bev(c.l) == ex) return ex;
        }
        return !ex;
      }
      default:
        return atom(c);
    }
  }

  const Structure& s_;
  const Semiring* sr_;
  int n_ = 0;
  std::vector<CNode> nodes_;
  std::vector<std::uint64_t> vals_;
  int root_ = -1;
  bool uses_sets_ = false;
  Weight zero_, one_;
};

}  // namespace

Weight eval_weighted(const Semiring& sr, const Formula& f, const Structure& s, const Assignment& g,
                     const Limits& limits) {
  Machine m(f, s, g, &sr, limits);
  return m.weighted();
}

bool eval_boolean(const Formula& f, const Structure& s, const Assignment& g, const Limits& limits) {
  Machine m(f, s, g, nullptr, limits);
  return m.boolean();
}

// ---- disambiguation

namespace {

Formula order_guard_atom(Op q, const std::string& y, const std::string& x) {
  return q == Op::exists1 || q == Op::forall1 ? lt(y, x) : lex_less(y, x);
}

std::string guard_var(Op q, const Formula& body, const std::string& x) {
  auto avoid = all_vars(body);
  avoid.insert(x);
  return fresh_name(q == Op::exists1 || q == Op::forall1 ? "y" : "Y", avoid);
}

class Recognizer;
std::optional<Formula> recognized(Recognizer* r, const Formula& f);

Formula plus(const Formula& f, Recognizer* r = nullptr);
Formula minus(const Formula& f, Recognizer* r = nullptr);

// exists v. (psi+ and forall w. (w < v and psi(w))-) where psi is given
// with v free.
Formula first_witness(Op q, const std::string& v, const Formula& psi, Recognizer* r) {
  std::string w = guard_var(q, psi, v);
  Formula guard_body = minus(conj(order_guard_atom(q, w, v), rename(psi, {{v, w}})), r);
  Formula guard = forall(w, guard_body);
  return exists(v, conj(plus(psi, r), guard));
}

// With a recognizer, subformulas that already are characteristic forms are
// kept and their dual is used as the negative form.
Formula plus(const Formula& f, Recognizer* r) {
  if (r && f->op != Op::constant && recognized(r, f)) return f;
  switch (f->op) {
    case Op::constant:
      throw InputError("disambiguation needs a classical formula, found a constant");
    case Op::neg:
      return minus(f->left, r);
    case Op::disj:
      return disj(plus(f->left, r), conj(minus(f->left, r), plus(f->right, r)));
    case Op::conj:
      return conj(plus(f->left, r), plus(f->right, r));
    case Op::exists1:
    case Op::exists2:
      return first_witness(f->op, f->a, f->left, r);
    case Op::forall1:
    case Op::forall2:
      return forall(f->a, plus(f->left, r));
    default:
      return f;
  }
}

Formula minus(const Formula& f, Recognizer* r) {
  if (r && f->op != Op::constant)
    if (auto d = recognized(r, f)) return *d;
  switch (f->op) {
    case Op::constant:
      throw InputError("disambiguation needs a classical formula, found a constant");
    case Op::neg:
      return plus(f->left, r);
    case Op::disj:
      return conj(minus(f->left, r), minus(f->right, r));
    case Op::conj:
      return disj(minus(f->left, r), conj(plus(f->left, r), minus(f->right, r)));
    case Op::exists1:
    case Op::exists2:
      return forall(f->a, minus(f->left, r));
    case Op::forall1:
    case Op::forall2:
      return first_witness(f->op == Op::forall1 ? Op::exists1 : Op::exists2, f->a, neg(f->left), r);
    default:
      return neg(f);
  }
}

}  // namespace

Formula disambiguate_plus(const Formula& f) { return plus(f); }
Formula disambiguate_minus(const Formula& f) { return minus(f); }

Formula wimplies(const Formula& f, const Formula& g) { return disj(minus(f), conj(plus(f), g)); }

// ---- recognizer

namespace {

class Recognizer {
 public:
  std::optional<Formula> dual(const Formula& f) {
    auto it = memo_.find(f.get());
    if (it != memo_.end()) return it->second;
    auto r = compute(f);
    memo_.emplace(f.get(), r);
    keep_.push_back(f);
    return r;
  }

 private:
  // forall w. ((w < v)- or ((w < v)+ and g[w/v]))
  static Formula guard(Op q, const std::string& v, const std::string& w, const Formula& g) {
    Formula o = order_guard_atom(q, w, v);
    return forall(w, disj(minus(o), conj(plus(o), rename(g, {{v, w}}))));
  }

  std::optional<Formula> compute(const Formula& f) {
    switch (f->op) {
      case Op::constant:
        return std::nullopt;
      case Op::neg:
        if (is_atom(f->left->op)) return f->left;
        return std::nullopt;
      case Op::conj: {
        auto dl = dual(f->left);
        if (!dl) return std::nullopt;
        auto dr = dual(f->right);
        if (!dr) return std::nullopt;
        return disj(*dl, conj(f->left, *dr));
      }
      case Op::disj: {
        if (f->right->op != Op::conj) return std::nullopt;
        auto dl = dual(f->left);
        if (!dl || !alpha_equal(*dl, f->right->left)) return std::nullopt;
        auto dr = dual(f->right->right);
        if (!dr) return std::nullopt;
        return conj(*dl, *dr);
      }
      case Op::forall1:
      case Op::forall2: {
        auto db = dual(f->left);
        if (!db) return std::nullopt;
        Op q = f->op == Op::forall1 ? Op::exists1 : Op::exists2;
        std::string w = guard_var(q, f->left, f->a);
        return exists(f->a, conj(*db, guard(q, f->a, w, f->left)));
      }
      case Op::exists1:
      case Op::exists2: {
        const Formula& body = f->left;
        if (body->op != Op::conj) return std::nullopt;
        const Formula& g = body->right;
        if (!is_quantifier(g->op) || (g->op != Op::forall1 && g->op != Op::forall2)) return std::nullopt;
        if ((g->op == Op::forall1) != (f->op == Op::exists1)) return std::nullopt;
        auto dl = dual(body->left);
        if (!dl) return std::nullopt;
        std::set<std::string> avoid = all_vars(f);
        auto more = all_vars(*dl);
        avoid.insert(more.begin(), more.end());
        std::string w = fresh_name(f->op == Op::exists1 ? "y" : "Y", avoid);
        if (!alpha_equal(g, guard(f->op, f->a, w, *dl))) return std::nullopt;
        return forall(f->a, *dl);
      }
      default:
        return neg(f);
    }
  }

  std::unordered_map<const Node*, std::optional<Formula>> memo_;
  std::vector<Formula> keep_;
};

std::optional<Formula> recognized(Recognizer* r, const Formula& f) { return r->dual(f); }

}  // namespace

Formula characteristic_plus(const Formula& f) {
  Recognizer r;
  return plus(f, &r);
}

Formula characteristic_minus(const Formula& f) {
  Recognizer r;
  return minus(f, &r);
}

std::optional<Formula> unambiguous_dual(const Formula& f) {
  Recognizer r;
  return r.dual(f);
}

bool is_syntactically_unambiguous(const Formula& f) { return unambiguous_dual(f).has_value(); }

namespace {

struct Classifier {
  Recognizer rec;
  std::unordered_map<const Node*, bool> au_memo, wu_memo;

  bool su(const Formula& f) { return rec.dual(f).has_value(); }

  bool au(const Formula& f) {
    auto it = au_memo.find(f.get());
    if (it != au_memo.end()) return it->second;
    bool r = f->op == Op::constant || su(f) ||
             ((f->op == Op::conj || f->op == Op::disj) && au(f->left) && au(f->right));
    au_memo[f.get()] = r;
    return r;
  }

  bool wu(const Formula& f) {
    auto it = wu_memo.find(f.get());
    if (it != wu_memo.end()) return it->second;
    bool r = f->op == Op::constant || su(f) ||
             ((f->op == Op::conj || f->op == Op::disj) && wu(f->left) && wu(f->right)) ||
             ((f->op == Op::exists1 || f->op == Op::exists2) && wu(f->left));
    wu_memo[f.get()] = r;
    return r;
  }

  // Checks the universal-quantifier conditions at every subformula.
  bool restricted(const Formula& f, bool weak) {
    if (f->op == Op::forall2 && !su(f->left)) return false;
    if (f->op == Op::forall1 && !(weak ? wu(f->left) : au(f->left))) return false;
    if (f->left && !restricted(f->left, weak)) return false;
    if (f->right && !restricted(f->right, weak)) return false;
    return true;
  }

  static bool first_order(const Formula& f) {
    if (f->op == Op::exists2 || f->op == Op::forall2) return false;
    return (!f->left || first_order(f->left)) && (!f->right || first_order(f->right));
  }
};

}  // namespace

Fragments classify(const Formula& f) {
  Fragments r;
  if (!is_weighted_syntax(f)) return r;
  Classifier c;
  r.general = true;
  r.synt_unambiguous = c.su(f);
  r.aumso = c.au(f);
  r.wumso = c.wu(f);
  r.srmso = c.restricted(f, false);
  r.swrmso = c.restricted(f, true);
  r.fo = Classifier::first_order(f);
  r.srfo = r.srmso && r.fo;
  Formula g = f;
  while (g->op == Op::exists2) g = g->left;
  r.sremso = r.srmso && c.restricted(g, false) && Classifier::first_order(g);
  return r;
}

// ---- macros

namespace {
std::string pick(const std::string& base, std::initializer_list<std::string> used) {
  return fresh_name(base, std::set<std::string>(used));
}
}  // namespace

Formula min_pos(const std::string& x) {
  std::string y = pick("y", {x});
  return forall(y, leq(x, y));
}

Formula max_pos(const std::string& x) {
  std::string y = pick("y", {x});
  return forall(y, leq(y, x));
}

Formula is_call(const std::string& x) {
  std::string y = pick("y", {x});
  return exists(y, edge(x, y));
}

Formula is_return(const std::string& x) {
  std::string y = pick("y", {x});
  return exists(y, edge(y, x));
}

Formula first_nu(const std::string& x) {
  std::string y = pick("y", {x});
  return conj(is_call(x), forall(y, implies(is_call(y), leq(x, y))));
}

Formula next_nu(const std::string& x, const std::string& y) {
  std::string z = pick("z", {x, y});
  return conj({lt(x, y), disj(is_call(y), is_return(y)),
               forall(z, implies(conj(lt(x, z), lt(z, y)), conj(neg(is_call(z)), neg(is_return(z)))))});
}

Formula open_pos(const std::string& x) {
  std::string y = pick("y", {x});
  return forall(y, conj(wimplies(conj(leq(y, x), is_call(y)), k("1")),
                        wimplies(conj(leq(y, x), is_return(y)), k("-1"))));
}

Formula nesting_depth_formula() { return exists("x", open_pos("x")); }

Formula inchild(const std::string& x, const std::string& y) {
  std::string z = pick("z", {x, y});
  std::string z2 = fresh_name(z + "'", {x, y, z});
  return conj(edge(x, y), exists(z, exists(z2, conj({lt(x, z), lt(z, y), edge(z, z2)}))));
}

Formula surf(const std::string& x, const std::string& y, const std::string& x1, const std::string& y1) {
  std::string z = pick("z", {x, y, x1, y1});
  std::string z2 = fresh_name(z + "'", {x, y, x1, y1, z});
  Formula between = conj({lt(x, z), lt(z, x1), lt(y1, z2), lt(z2, y)});
  return conj({lt(x, x1), lt(x1, y1), lt(y1, y), edge(x1, y1),
               forall(z, forall(z2, implies(between, neg(edge(z, z2)))))});
}

// ---- projections

Weight exists_nu(const Semiring& sr, const Formula& f, const Word& w, const Limits& limits) {
  if (w.empty()) throw InputError("projection needs a nonempty word");
  Weight acc = sr.zero();
  for (const auto& arcs : enumerate_nestings(static_cast<int>(w.size()), limits))
    acc = sr.add(acc, eval_weighted(sr, f, Structure::of(NestedWord(w, arcs)), {}, limits));
  return acc;
}

Weight exists_tdo(const Semiring& sr, const Formula& f, const Word& w, const Limits& limits) {
  if (w.empty()) throw InputError("projection needs a nonempty word");
  Weight acc = sr.zero();
  for (const auto& t : enumerate_texts(w, limits))
    acc = sr.add(acc, eval_weighted(sr, f, Structure::of(t), {}, limits));
  return acc;
}

}  // namespace nestweight
