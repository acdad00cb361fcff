#include "nestweight/formula.hpp"

#include <cctype>
#include <functional>
#include <optional>
#include <sstream>

#include "nestweight/error.hpp"

namespace nestweight {

namespace {

Formula make(Op op, std::string a = {}, std::string b = {}, Formula l = nullptr, Formula r = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

void need_first(const std::string& v) {
  if (!is_first_order_name(v)) throw InputError("expected a first-order variable, got '" + v + "'");
}
void need_second(const std::string& v) {
  if (!is_second_order_name(v)) throw InputError("expected a second-order variable, got '" + v + "'");
}
void need(const Formula& f) {
  if (!f) throw InputError("missing subformula");
}

bool valid_name(const std::string& v) {
  if (v.empty() || !std::isalpha(static_cast<unsigned char>(v[0]))) return false;
  for (char c : v)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') return false;
  return true;
}

}  // namespace

bool is_atom(Op op) {
  return op == Op::eq || op == Op::lab || op == Op::leq || op == Op::edge || op == Op::in;
}

bool is_quantifier(Op op) {
  return op == Op::exists1 || op == Op::exists2 || op == Op::forall1 || op == Op::forall2;
}

bool is_first_order_name(const std::string& v) {
  return valid_name(v) && std::islower(static_cast<unsigned char>(v[0]));
}
bool is_second_order_name(const std::string& v) {
  return valid_name(v) && std::isupper(static_cast<unsigned char>(v[0]));
}

Formula k(const std::string& token) {
  if (token.empty()) throw InputError("empty weight token");
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->token = token;
  return n;
}
Formula eq(const std::string& x, const std::string& y) {
  need_first(x);
  need_first(y);
  return make(Op::eq, x, y);
}
Formula lab(const Symbol& a, const std::string& x) {
  if (a.empty()) throw InputError("empty label");
  need_first(x);
  return make(Op::lab, a, x);
}
Formula leq(const std::string& x, const std::string& y) {
  need_first(x);
  need_first(y);
  return make(Op::leq, x, y);
}
Formula edge(const std::string& x, const std::string& y) {
  need_first(x);
  need_first(y);
  return make(Op::edge, x, y);
}
Formula in(const std::string& x, const std::string& X) {
  need_first(x);
  need_second(X);
  return make(Op::in, x, X);
}
Formula neg(Formula f) {
  need(f);
  return make(Op::neg, {}, {}, std::move(f));
}
Formula conj(Formula f, Formula g) {
  need(f);
  need(g);
  return make(Op::conj, {}, {}, std::move(f), std::move(g));
}
Formula disj(Formula f, Formula g) {
  need(f);
  need(g);
  return make(Op::disj, {}, {}, std::move(f), std::move(g));
}
Formula conj(const std::vector<Formula>& fs) {
  if (fs.empty()) throw InputError("empty conjunction");
  Formula r = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) r = conj(r, fs[i]);
  return r;
}
Formula disj(const std::vector<Formula>& fs) {
  if (fs.empty()) throw InputError("empty disjunction");
  Formula r = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) r = disj(r, fs[i]);
  return r;
}
Formula exists(const std::string& v, Formula body) {
  need(body);
  if (is_first_order_name(v)) return make(Op::exists1, v, {}, std::move(body));
  need_second(v);
  return make(Op::exists2, v, {}, std::move(body));
}
Formula forall(const std::string& v, Formula body) {
  need(body);
  if (is_first_order_name(v)) return make(Op::forall1, v, {}, std::move(body));
  need_second(v);
  return make(Op::forall2, v, {}, std::move(body));
}
Formula exists(const std::vector<std::string>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = exists(*it, body);
  return body;
}
Formula forall(const std::vector<std::string>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = forall(*it, body);
  return body;
}

Formula lt(const std::string& x, const std::string& y) { return neg(leq(y, x)); }
Formula implies(Formula f, Formula g) { return disj(neg(std::move(f)), std::move(g)); }
Formula iff(Formula f, Formula g) { return disj(conj(f, g), conj(neg(f), neg(g))); }
Formula verum() { return forall("x", eq("x", "x")); }

Formula lex_less(const std::string& X, const std::string& Y) {
  need_second(X);
  need_second(Y);
  // the smallest position where the sets differ belongs to Y
  return exists("y", conj({in("y", Y), neg(in("y", X)),
                           forall("z", implies(lt("z", "y"), iff(in("z", X), in("z", Y))))}));
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  auto use = [&](const std::string& v) {
    if (!bound.count(v)) out.insert(v);
  };
  switch (f->op) {
    case Op::constant:
      return;
    case Op::eq:
    case Op::leq:
    case Op::edge:
    case Op::in:
      use(f->a);
      use(f->b);
      return;
    case Op::lab:
      use(f->b);
      return;
    case Op::neg:
      collect_free(f->left, bound, out);
      return;
    case Op::conj:
    case Op::disj:
      collect_free(f->left, bound, out);
      collect_free(f->right, bound, out);
      return;
    default: {
      bool fresh = bound.insert(f->a).second;
      collect_free(f->left, bound, out);
      if (fresh) bound.erase(f->a);
    }
  }
}

void collect_all(const Formula& f, std::set<std::string>& out) {
  switch (f->op) {
    case Op::constant:
      return;
    case Op::lab:
      out.insert(f->b);
      return;
    case Op::neg:
      collect_all(f->left, out);
      return;
    case Op::conj:
    case Op::disj:
      collect_all(f->left, out);
      collect_all(f->right, out);
      return;
    default:
      if (is_atom(f->op)) {
        out.insert(f->a);
        out.insert(f->b);
      } else {
        out.insert(f->a);
        collect_all(f->left, out);
      }
  }
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  collect_all(f, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string c = base + std::to_string(i);
    if (!avoid.count(c)) return c;
  }
}

Formula rename(const Formula& f, const std::map<std::string, std::string>& m) {
  if (m.empty()) return f;
  auto sub = [&](const std::string& v) {
    auto it = m.find(v);
    return it == m.end() ? v : it->second;
  };
  switch (f->op) {
    case Op::constant:
      return f;
    case Op::lab:
      return make(Op::lab, f->a, sub(f->b));
    case Op::neg:
      return neg(rename(f->left, m));
    case Op::conj:
      return conj(rename(f->left, m), rename(f->right, m));
    case Op::disj:
      return disj(rename(f->left, m), rename(f->right, m));
    default:
      break;
  }
  if (is_atom(f->op)) return make(f->op, sub(f->a), sub(f->b));
  std::map<std::string, std::string> inner = m;
  inner.erase(f->a);
  auto fv = free_vars(f->left);
  bool clash = false;
  for (auto& [from, to] : inner)
    if (fv.count(from) && to == f->a) clash = true;
  std::string v = f->a;
  if (clash) {
    std::set<std::string> avoid = all_vars(f->left);
    for (auto& [from, to] : inner) {
      avoid.insert(from);
      avoid.insert(to);
    }
    v = fresh_name(f->a, avoid);
    inner[f->a] = v;
  }
  for (auto it = inner.begin(); it != inner.end();) {
    if (!fv.count(it->first)) it = inner.erase(it);
    else ++it;
  }
  return make(f->op, v, {}, rename(f->left, inner));
}

bool structurally_equal(const Formula& f, const Formula& g) {
  if (f == g) return true;
  if (f->op != g->op || f->a != g->a || f->b != g->b || f->token != g->token) return false;
  if (static_cast<bool>(f->left) != static_cast<bool>(g->left)) return false;
  if (f->left && !structurally_equal(f->left, g->left)) return false;
  if (static_cast<bool>(f->right) != static_cast<bool>(g->right)) return false;
  if (f->right && !structurally_equal(f->right, g->right)) return false;
  return true;
}

namespace {

using Env = std::map<std::string, int>;

bool same_var(const std::string& u, const std::string& v, const Env& eu, const Env& ev) {
  auto iu = eu.find(u);
  auto iv = ev.find(v);
  if (iu == eu.end() && iv == ev.end()) return u == v;
  if (iu == eu.end() || iv == ev.end()) return false;
  return iu->second == iv->second;
}

bool alpha(const Formula& f, const Formula& g, Env& ef, Env& eg, int& depth) {
  if (f->op != g->op) return false;
  switch (f->op) {
    case Op::constant:
      return f->token == g->token;
    case Op::lab:
      return f->a == g->a && same_var(f->b, g->b, ef, eg);
    case Op::neg:
      return alpha(f->left, g->left, ef, eg, depth);
    case Op::conj:
    case Op::disj:
      return alpha(f->left, g->left, ef, eg, depth) && alpha(f->right, g->right, ef, eg, depth);
    default:
      break;
  }
  if (is_atom(f->op)) return same_var(f->a, g->a, ef, eg) && same_var(f->b, g->b, ef, eg);
  int id = ++depth;
  auto of = ef.find(f->a);
  auto og = eg.find(g->a);
  std::optional<int> save_f = of == ef.end() ? std::nullopt : std::optional<int>(of->second);
  std::optional<int> save_g = og == eg.end() ? std::nullopt : std::optional<int>(og->second);
  ef[f->a] = id;
  eg[g->a] = id;
  bool r = alpha(f->left, g->left, ef, eg, depth);
  if (save_f) ef[f->a] = *save_f;
  else ef.erase(f->a);
  if (save_g) eg[g->a] = *save_g;
  else eg.erase(g->a);
  return r;
}

}  // namespace

bool alpha_equal(const Formula& f, const Formula& g) {
  if (f == g) return true;
  Env ef, eg;
  int depth = 0;
  return alpha(f, g, ef, eg, depth);
}

int formula_size(const Formula& f) {
  int s = 1;
  if (f->left) s += formula_size(f->left);
  if (f->right) s += formula_size(f->right);
  return s;
}

bool has_constant(const Formula& f) {
  if (f->op == Op::constant) return true;
  return (f->left && has_constant(f->left)) || (f->right && has_constant(f->right));
}

bool is_weighted_syntax(const Formula& f) {
  if (f->op == Op::neg) return is_atom(f->left->op);
  return (!f->left || is_weighted_syntax(f->left)) && (!f->right || is_weighted_syntax(f->right));
}

namespace {

const char* op_word(Op op) {
  switch (op) {
    case Op::eq: return "=";
    case Op::lab: return "lab";
    case Op::leq: return "<=";
    case Op::edge: return "edge";
    case Op::in: return "in";
    case Op::neg: return "not";
    case Op::conj: return "and";
    case Op::disj: return "or";
    case Op::exists1: return "E1";
    case Op::exists2: return "E2";
    case Op::forall1: return "A1";
    case Op::forall2: return "A2";
    default: return "k";
  }
}

void print(const Formula& f, std::ostream& os) {
  os << '(' << op_word(f->op);
  if (f->op == Op::constant) {
    os << " \"" << f->token << "\")";
    return;
  }
  if (is_atom(f->op)) {
    os << ' ' << f->a << ' ' << f->b << ')';
    return;
  }
  if (is_quantifier(f->op)) os << ' ' << f->a;
  os << ' ';
  print(f->left, os);
  if (f->right) {
    os << ' ';
    print(f->right, os);
  }
  os << ')';
}

struct Token {
  enum Kind { open, close, word, quoted, end } kind;
  std::string text;
  size_t pos;
};

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) { advance(); }

  Formula formula() {
    expect(Token::open, "'('");
    if (cur_.kind != Token::word) fail("operator");
    std::string op = cur_.text;
    advance();
    Formula r;
    try {
      r = body(op);
    } catch (const InputError& e) {
      std::string msg = e.what();
      if (msg.rfind("formula:", 0) == 0) throw;
      throw InputError("formula: " + msg + " near offset " + std::to_string(cur_.pos));
    }
    expect(Token::close, "')'");
    return r;
  }

  void finish() {
    if (cur_.kind != Token::end) fail("end of input");
  }

 private:
  Formula body(const std::string& op) {
    if (op == "k") {
      if (cur_.kind != Token::word && cur_.kind != Token::quoted) fail("weight");
      std::string t = cur_.text;
      advance();
      return k(t);
    }
    if (op == "=" || op == "<=" || op == "edge" || op == "in" || op == "lab") {
      std::string a = word(), b = word();
      if (op == "=") return eq(a, b);
      if (op == "<=") return leq(a, b);
      if (op == "edge") return edge(a, b);
      if (op == "in") return in(a, b);
      return lab(a, b);
    }
    if (op == "not") return neg(formula());
    if (op == "and" || op == "or") {
      std::vector<Formula> fs;
      while (cur_.kind == Token::open) fs.push_back(formula());
      if (fs.size() < 2) fail("at least two operands");
      return op == "and" ? conj(fs) : disj(fs);
    }
    if (op == "E1" || op == "A1" || op == "E2" || op == "A2") {
      std::string v = word();
      if (op.back() == '1') need_first(v);
      else need_second(v);
      Formula f = formula();
      return op[0] == 'E' ? exists(v, f) : forall(v, f);
    }
    fail("known operator instead of '" + op + "'");
    return nullptr;
  }

  std::string word() {
    if (cur_.kind != Token::word) fail("name");
    std::string t = cur_.text;
    advance();
    return t;
  }

  void expect(Token::Kind k, const char* what) {
    if (cur_.kind != k) fail(what);
    advance();
  }

  [[noreturn]] void fail(const std::string& what) {
    throw InputError("formula: expected " + what + " at offset " + std::to_string(cur_.pos));
  }

  void advance() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    cur_.pos = i_;
    cur_.text.clear();
    if (i_ >= s_.size()) {
      cur_.kind = Token::end;
      return;
    }
    char c = s_[i_];
    if (c == '(' || c == ')') {
      cur_.kind = c == '(' ? Token::open : Token::close;
      ++i_;
      return;
    }
    if (c == '"') {
      size_t j = s_.find('"', i_ + 1);
      if (j == std::string::npos) throw InputError("formula: unterminated string at offset " + std::to_string(i_));
      cur_.kind = Token::quoted;
      cur_.text = s_.substr(i_ + 1, j - i_ - 1);
      i_ = j + 1;
      return;
    }
    size_t j = i_;
    while (j < s_.size() && !std::isspace(static_cast<unsigned char>(s_[j])) && s_[j] != '(' && s_[j] != ')' &&
           s_[j] != '"')
      ++j;
    cur_.kind = Token::word;
    cur_.text = s_.substr(i_, j - i_);
    i_ = j;
  }

  const std::string& s_;
  size_t i_ = 0;
  Token cur_{Token::end, {}, 0};
};

}  // namespace

std::string to_sexpr(const Formula& f) {
  std::ostringstream os;
  print(f, os);
  return os.str();
}

Formula parse_formula(const std::string& text) {
  Parser p(text);
  Formula f = p.formula();
  p.finish();
  return f;
}

}  // namespace nestweight
