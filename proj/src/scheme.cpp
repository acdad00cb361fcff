#include "nestweight/scheme.hpp"

#include <algorithm>

#include "nestweight/error.hpp"

namespace nestweight {

namespace {

void check_free(const Formula& f, const char* what, std::set<std::string> allowed) {
  if (!f) throw InputError(std::string("definition scheme: missing ") + what);
  for (const auto& v : free_vars(f))
    if (!allowed.count(v)) throw InputError(std::string("definition scheme: ") + what + " has free variable '" + v + "'");
  if (has_constant(f)) throw InputError(std::string("definition scheme: ") + what + " contains a weight constant");
}

Assignment base_assignment(const DefinitionScheme& d, const std::vector<std::set<int>>& params) {
  Assignment g;
  for (size_t i = 0; i < params.size(); ++i) g[d.parameters[i]] = params[i];
  return g;
}

}  // namespace

void validate_scheme(const DefinitionScheme& d) {
  std::set<std::string> ps(d.parameters.begin(), d.parameters.end());
  if (ps.size() != d.parameters.size()) throw InputError("definition scheme: repeated parameter");
  for (const auto& p : ps)
    if (!is_second_order_name(p)) throw InputError("definition scheme: parameter '" + p + "' is not a set variable");
  check_free(d.theta, "theta", ps);
  auto px = ps;
  px.insert("x");
  check_free(d.delta, "domain formula", px);
  for (const auto& [a, f] : d.labels) check_free(f, "label formula", px);
  px.insert("y");
  check_free(d.order, "order formula", px);
  check_free(d.edge, "edge formula", px);
}

std::optional<Structure> deftrans_apply(const DefinitionScheme& d, const Structure& s,
                                        const std::vector<std::set<int>>& params, const Limits& limits) {
  if (params.size() != d.parameters.size())
    throw InputError("definition scheme expects " + std::to_string(d.parameters.size()) + " parameters, got " +
                     std::to_string(params.size()));
  if (s.signature() != d.source) throw InputError("structure does not match the scheme's source signature");
  validate_scheme(d);
  Assignment g = base_assignment(d, params);
  if (!eval_boolean(d.theta, s, g, limits)) return std::nullopt;

  std::vector<int> dom;
  for (int i = 1; i <= s.size(); ++i) {
    g["x"] = {i};
    if (eval_boolean(d.delta, s, g, limits)) dom.push_back(i);
  }
  int m = static_cast<int>(dom.size());
  auto rel = [&](const Formula& f, int i, int j) {
    g["x"] = {dom[i]};
    g["y"] = {dom[j]};
    return eval_boolean(f, s, g, limits);
  };
  std::vector<std::vector<char>> ord(m, std::vector<char>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) ord[i][j] = rel(d.order, i, j);
  std::vector<int> rank(m, 0);
  for (int i = 0; i < m; ++i) {
    if (!ord[i][i]) throw InputError("definition scheme: order formula is not reflexive");
    for (int j = 0; j < m; ++j) {
      if (i != j && ord[i][j] == ord[j][i]) throw InputError("definition scheme: order formula is not a linear order");
      for (int l = 0; l < m; ++l)
        if (ord[i][j] && ord[j][l] && !ord[i][l]) throw InputError("definition scheme: order formula is not transitive");
      if (ord[j][i]) ++rank[i];
    }
  }
  std::vector<int> at(m);  // new position (0-based) -> index into dom
  for (int i = 0; i < m; ++i) at[rank[i] - 1] = i;

  Word labels(m);
  for (int p = 0; p < m; ++p) {
    int found = 0;
    for (const auto& [a, f] : d.labels) {
      g["x"] = {dom[at[p]]};
      if (eval_boolean(f, s, g, limits)) {
        labels[p] = a;
        ++found;
      }
    }
    if (found != 1)
      throw InputError("definition scheme: element " + std::to_string(dom[at[p]]) + " gets " + std::to_string(found) +
                       " labels");
  }
  std::vector<std::pair<int, int>> edges;
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      if (rel(d.edge, at[p], at[q])) edges.emplace_back(p + 1, q + 1);
  Structure out(d.target, labels, edges);
  bool ok = d.target == Signature::nested ? out.as_nested_word().has_value() : out.as_text().has_value();
  if (!ok) throw InputError("definition scheme: output is not a valid structure of the target signature");
  return out;
}

std::vector<std::vector<std::set<int>>> satisfying_parameters(const DefinitionScheme& d, const Structure& s,
                                                              const Limits& limits) {
  int n = s.size();
  size_t k = d.parameters.size();
  if (static_cast<double>(n) * static_cast<double>(k) > 62 ||
      (std::uint64_t{1} << (n * k)) > limits.max_runs)
    throw GuardError("parameter enumeration exceeds the bound");
  std::vector<std::vector<std::set<int>>> out;
  std::uint64_t total = std::uint64_t{1} << (n * k);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<std::set<int>> ps(k);
    for (size_t j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i)
        if ((code >> (j * n + i)) & 1) ps[j].insert(i + 1);
    if (eval_boolean(d.theta, s, base_assignment(d, ps), limits)) out.push_back(std::move(ps));
  }
  return out;
}

DefinitionScheme identity_scheme(Signature sig, const std::vector<Symbol>& alphabet) {
  DefinitionScheme d;
  d.source = d.target = sig;
  d.theta = verum();
  d.delta = eq("x", "x");
  for (const auto& a : alphabet) d.labels[a] = lab(a, "x");
  d.order = leq("x", "y");
  d.edge = edge("x", "y");
  return d;
}

Formula phi_circ_relation(const std::string& x, const std::string& y, const std::string& X1) {
  std::set<std::string> used{x, y, X1};
  std::string z1 = fresh_name("z1", used);
  used.insert(z1);
  std::string z2 = fresh_name("z2", used);
  used.insert(z2);
  std::string w1 = fresh_name("w1", used);
  used.insert(w1);
  std::string w2 = fresh_name("w2", used);
  Formula inside = conj({leq(z1, x), leq(x, y), leq(y, z2)});
  Formula tighter = conj({lt(z1, w1), leq(w1, x), leq(x, y), leq(y, w2), lt(w2, z2)});
  Formula arc = conj({inside, edge(z1, z2), in(z1, X1), forall(w1, forall(w2, implies(tighter, neg(edge(w1, w2)))))});
  return conj(lt(x, y), exists(z1, exists(z2, arc)));
}

DefinitionScheme phi_circ_scheme(const std::vector<Symbol>& alphabet) {
  DefinitionScheme d;
  d.source = Signature::nested;
  d.target = Signature::text;
  d.parameters = {"X1", "X2", "Y1", "Y2"};
  auto disjoint = [](const std::string& A, const std::string& B) {
    return neg(exists("z", conj(in("z", A), in("z", B))));
  };
  auto within = [](const std::string& A, const std::string& B, const Formula& kind) {
    return forall("z", implies(disj(in("z", A), in("z", B)), kind));
  };
  auto step = [](const std::string& from, bool to_return, const std::string& to) {
    Formula kind = to_return ? is_return("z2") : is_call("z2");
    return forall("z1", forall("z2", implies(conj({in("z1", from), next_nu("z1", "z2"), kind}), in("z2", to))));
  };
  d.theta = conj({disjoint("X1", "X2"), within("X1", "X2", is_call("z")), disjoint("Y1", "Y2"),
                  within("Y1", "Y2", is_return("z")), forall("z", implies(first_nu("z"), in("z", "X1"))),
                  step("X1", true, "Y1"), step("X1", false, "X2"), step("X2", true, "Y2"), step("X2", false, "X1"),
                  step("Y1", true, "Y2"), step("Y1", false, "X1"), step("Y2", true, "Y1"), step("Y2", false, "X2")});
  d.delta = eq("x", "x");
  for (const auto& a : alphabet) d.labels[a] = lab(a, "x");
  d.order = leq("x", "y");
  d.edge = disj({eq("x", "y"), conj(lt("y", "x"), phi_circ_relation("y", "x", "X1")),
                 conj(lt("x", "y"), neg(phi_circ_relation("x", "y", "X1")))});
  return d;
}

namespace {

class Translator {
 public:
  Translator(const DefinitionScheme& d, const Formula& f) : d_(d) {
    // keep the parameters apart from the names used by f
    std::set<std::string> avoid = all_vars(f);
    for (const auto& p : d.parameters) avoid.insert(p);
    for (const auto& p : d.parameters) {
      std::string q = p;
      if (all_vars(f).count(p)) {
        q = fresh_name(p, avoid);
        avoid.insert(q);
      }
      params_.push_back(q);
      if (q != p) ren_[p] = q;
    }
  }

  const std::vector<std::string>& params() const { return params_; }
  Formula theta() const { return rename(d_.theta, ren_); }

  Formula hat(const Formula& f) {
    switch (f->op) {
      case Op::constant:
      case Op::eq:
      case Op::in:
        return f;
      case Op::lab: {
        auto it = d_.labels.find(f->a);
        if (it == d_.labels.end()) throw InputError("formula uses label '" + f->a + "' unknown to the scheme");
        return disambiguate_plus(inst(it->second, {{"x", f->b}}));
      }
      case Op::leq:
        return disambiguate_plus(inst(d_.order, {{"x", f->a}, {"y", f->b}}));
      case Op::edge:
        return disambiguate_plus(inst(d_.edge, {{"x", f->a}, {"y", f->b}}));
      case Op::neg:
        if (!is_atom(f->left->op)) throw InputError("translation needs negation on atoms only");
        return characteristic_minus(hat(f->left));
      case Op::conj:
        return conj(hat(f->left), hat(f->right));
      case Op::disj: {
        Formula r = disj(hat(f->left), hat(f->right));
        return is_syntactically_unambiguous(f) ? characteristic_plus(r) : r;
      }
      case Op::exists1: {
        Formula dx = delta(f->a);
        if (is_syntactically_unambiguous(f)) return characteristic_plus(exists(f->a, conj(dx, hat(f->left))));
        return exists(f->a, conj(disambiguate_plus(dx), hat(f->left)));
      }
      case Op::exists2: {
        Formula dom = domain(f->a);
        if (is_syntactically_unambiguous(f)) return characteristic_plus(exists(f->a, conj(dom, hat(f->left))));
        return exists(f->a, conj(disambiguate_plus(dom), hat(f->left)));
      }
      case Op::forall1:
        return forall(f->a, wimplies(delta(f->a), hat(f->left)));
      case Op::forall2:
        return forall(f->a, wimplies(domain(f->a), hat(f->left)));
    }
    return f;
  }

 private:
  Formula inst(const Formula& g, std::map<std::string, std::string> m) const {
    for (auto& [p, q] : ren_) m[p] = q;
    return rename(g, m);
  }

  Formula delta(const std::string& v) const { return inst(d_.delta, {{"x", v}}); }

  // forall u. (u in X -> delta(u))
  Formula domain(const std::string& X) const {
    std::set<std::string> avoid = all_vars(d_.delta);
    avoid.insert(X);
    for (const auto& p : params_) avoid.insert(p);
    std::string u = fresh_name("u", avoid);
    return forall(u, implies(in(u, X), delta(u)));
  }

  const DefinitionScheme& d_;
  std::vector<std::string> params_;
  std::map<std::string, std::string> ren_;
};

}  // namespace

Formula translate_body(const DefinitionScheme& d, const Formula& f) {
  validate_scheme(d);
  Translator t(d, f);
  return t.hat(f);
}

Formula translate_formula(const DefinitionScheme& d, const Formula& f) {
  validate_scheme(d);
  Translator t(d, f);
  Formula body = conj(disambiguate_plus(t.theta()), t.hat(f));
  return exists(t.params(), body);
}

}  // namespace nestweight
