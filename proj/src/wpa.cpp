#include "nestweight/wpa.hpp"

#include <set>

#include "nestweight/error.hpp"

namespace nestweight {

namespace {

template <class Map, class Key>
void accumulate(const Semiring& k, Map& m, const Key& key, const Weight& w) {
  if (k.is_zero(w)) return;
  auto it = m.find(key);
  if (it == m.end()) {
    m.emplace(key, w);
    return;
  }
  it->second = k.add(it->second, w);
  if (k.is_zero(it->second)) m.erase(it);
}

template <class Map, class Key>
Weight lookup(const Semiring& k, const Map& m, const Key& key) {
  auto it = m.find(key);
  return it == m.end() ? k.zero() : it->second;
}

}  // namespace

Wpa::Wpa(Semiring semiring, std::vector<std::string> hstates, std::vector<std::string> vstates,
         std::vector<std::string> parens)
    : semiring_(semiring), hstates_(std::move(hstates)), vstates_(std::move(vstates)), parens_(std::move(parens)) {
  for (int q = 0; q < num_states(); ++q)
    if (!index_.emplace(state_name(q), q).second) throw InputError("duplicate state '" + state_name(q) + "'");
  for (int s = 0; s < num_parens(); ++s)
    if (!paren_index_.emplace(parens_[s], s).second) throw InputError("duplicate bracket '" + parens_[s] + "'");
}

int Wpa::state_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw InputError("unknown state '" + name + "'");
  return it->second;
}

int Wpa::paren_index(const std::string& name) const {
  auto it = paren_index_.find(name);
  if (it == paren_index_.end()) throw InputError("unknown bracket '" + name + "'");
  return it->second;
}

std::vector<int> Wpa::states_of(Sort s) const {
  std::vector<int> out;
  for (int q = 0; q < num_states(); ++q)
    if (sort_of(q) == s) out.push_back(q);
  return out;
}

std::vector<Symbol> Wpa::alphabet() const {
  std::set<Symbol> s(declared_.begin(), declared_.end());
  for (const auto& [key, w] : mu_) s.insert(std::get<1>(key));
  return {s.begin(), s.end()};
}

void Wpa::check_state(int q) const {
  if (q < 0 || q >= num_states()) throw InputError("state index out of range");
}

void Wpa::check_paren(int s) const {
  if (s < 0 || s >= num_parens()) throw InputError("bracket index out of range");
}

void Wpa::add_mu(int p, const Symbol& a, int q, const Weight& w) {
  check_state(p);
  check_state(q);
  if (is_h(p) != is_h(q)) throw InputError("transition between states of different sorts");
  accumulate(semiring_, mu_, Key{p, a, q}, w);
}

void Wpa::add_open(int p, int s, int q, const Weight& w) {
  check_state(p);
  check_state(q);
  check_paren(s);
  if (is_h(p) == is_h(q)) throw InputError("bracket between states of the same sort");
  accumulate(semiring_, open_, ParenKey{p, s, q}, w);
}

void Wpa::add_close(int p, int s, int q, const Weight& w) {
  check_state(p);
  check_state(q);
  check_paren(s);
  if (is_h(p) == is_h(q)) throw InputError("bracket between states of the same sort");
  accumulate(semiring_, close_, ParenKey{p, s, q}, w);
}

void Wpa::add_lambda(int q, const Weight& w) {
  check_state(q);
  accumulate(semiring_, lambda_, q, w);
}

void Wpa::add_gamma(int q, const Weight& w) {
  check_state(q);
  accumulate(semiring_, gamma_, q, w);
}

Weight Wpa::mu(int p, const Symbol& a, int q) const { return lookup(semiring_, mu_, Key{p, a, q}); }
Weight Wpa::open(int p, int s, int q) const { return lookup(semiring_, open_, ParenKey{p, s, q}); }
Weight Wpa::close(int p, int s, int q) const { return lookup(semiring_, close_, ParenKey{p, s, q}); }
Weight Wpa::lambda(int q) const { return lookup(semiring_, lambda_, q); }
Weight Wpa::gamma(int q) const { return lookup(semiring_, gamma_, q); }

namespace {

class RunEnumerator {
 public:
  RunEnumerator(const Wpa& a, const Limits& limits) : a_(a), k_(a.semiring()), limits_(limits) {}

  std::vector<WpaRun> all(const Text& t) {
    if (t.size() == 1) {
      auto out = atomic(t, Sort::horizontal);
      auto v = atomic(t, Sort::vertical);
      out.insert(out.end(), v.begin(), v.end());
      return out;
    }
    auto out = rule2(t);
    auto w = wrapped(t);
    out.insert(out.end(), w.begin(), w.end());
    return out;
  }

 private:
  void count(std::size_t n) {
    total_ += n;
    if (total_ > limits_.max_runs) throw GuardError("run enumeration exceeds the bound");
  }

  // Runs with outer states of sort s that are not concatenations.
  std::vector<WpaRun> atomic(const Text& t, Sort s) {
    std::vector<WpaRun> out;
    if (t.size() == 1) {
      for (int p : a_.states_of(s))
        for (int q : a_.states_of(s))
          out.push_back({"(" + a_.state_name(p) + "," + t.label(1) + "," + a_.state_name(q) + ")",
                         a_.mu(p, t.label(1), q), p, q});
      count(out.size());
      return out;
    }
    if (decompose(t).sort == s) return out;
    return wrapped(t);
  }

  std::vector<WpaRun> wrapped(const Text& t) {
    std::vector<WpaRun> out;
    Sort outer = opposite(decompose(t).sort);
    for (const WpaRun& r : rule2(t))
      for (int s = 0; s < a_.num_parens(); ++s)
        for (int q1 : a_.states_of(outer))
          for (int q2 : a_.states_of(outer)) {
            const std::string& b = a_.parens()[s];
            WpaRun w;
            w.run = "(" + a_.state_name(q1) + ",(" + b + "," + a_.state_name(r.initial) + ")" + r.run + "(" +
                    a_.state_name(r.final) + ",)" + b + "," + a_.state_name(q2) + ")";
            w.weight = k_.mul(k_.mul(a_.open(q1, s, r.initial), r.weight), a_.close(r.final, s, q2));
            w.initial = q1;
            w.final = q2;
            out.push_back(std::move(w));
          }
    count(out.size());
    return out;
  }

  std::vector<WpaRun> rule2(const Text& t) {
    Decomposition d = decompose(t);
    std::vector<WpaRun> acc;
    bool first = true;
    for (const Interval& b : d.blocks) {
      auto parts = atomic(t.factor(b.lo, b.hi), d.sort);
      if (first) {
        acc = std::move(parts);
        first = false;
        continue;
      }
      std::vector<WpaRun> next;
      for (const WpaRun& x : acc)
        for (const WpaRun& y : parts)
          if (x.final == y.initial) next.push_back({x.run + y.run, k_.mul(x.weight, y.weight), x.initial, y.final});
      count(next.size());
      acc = std::move(next);
    }
    return acc;
  }

  const Wpa& a_;
  const Semiring& k_;
  const Limits& limits_;
  std::uint64_t total_ = 0;
};

using Matrix = std::vector<std::vector<Weight>>;

class BehaviorDp {
 public:
  explicit BehaviorDp(const Wpa& a) : a_(a), k_(a.semiring()), opens_(a.num_parens()), closes_(a.num_parens()) {
    for (const auto& [key, w] : a.opens()) opens_[std::get<1>(key)].push_back({std::get<0>(key), std::get<2>(key), w});
    for (const auto& [key, w] : a.closes()) closes_[std::get<1>(key)].push_back({std::get<0>(key), std::get<2>(key), w});
  }

  Weight top(const Text& t) {
    auto sum = [&](const std::vector<int>& states, const Matrix& m) {
      Weight total = k_.zero();
      for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = 0; j < states.size(); ++j)
          total = k_.add(total, k_.mul(k_.mul(a_.lambda(states[i]), m[i][j]), a_.gamma(states[j])));
      return total;
    };
    if (t.size() == 1) {
      return k_.add(sum(a_.states_of(Sort::horizontal), letter(t.label(1), Sort::horizontal)),
                    sum(a_.states_of(Sort::vertical), letter(t.label(1), Sort::vertical)));
    }
    Sort s = decompose(t).sort;
    Matrix r = rule2(t);
    return k_.add(sum(a_.states_of(s), r), sum(a_.states_of(opposite(s)), wrap(r, s)));
  }

 private:
  struct Entry {
    int from, to;
    Weight w;
  };

  // index of a state among the states of its sort
  int local(int q) const { return a_.is_h(q) ? q : q - a_.num_h(); }

  Matrix zeros(std::size_t r, std::size_t c) const { return Matrix(r, std::vector<Weight>(c, k_.zero())); }

  Matrix letter(const Symbol& a, Sort s) {
    auto st = a_.states_of(s);
    Matrix m = zeros(st.size(), st.size());
    for (std::size_t i = 0; i < st.size(); ++i)
      for (std::size_t j = 0; j < st.size(); ++j) m[i][j] = a_.mu(st[i], a, st[j]);
    return m;
  }

  // Parenthesizes a rule-2 matrix over sort `inner` into the opposite sort:
  // sum over brackets of open * r * close, as two sparse products.
  Matrix wrap(const Matrix& r, Sort inner) {
    const std::size_t ni = a_.states_of(inner).size(), no = a_.states_of(opposite(inner)).size();
    Matrix m = zeros(no, no);
    for (int s = 0; s < a_.num_parens(); ++s) {
      Matrix tmp = zeros(no, ni);
      bool any = false;
      for (const Entry& e : opens_[s]) {
        if (a_.sort_of(e.to) != inner) continue;
        const auto& row = r[local(e.to)];
        auto& out = tmp[local(e.from)];
        for (std::size_t y = 0; y < ni; ++y)
          if (!k_.is_zero(row[y])) {
            out[y] = k_.add(out[y], k_.mul(e.w, row[y]));
            any = true;
          }
      }
      if (!any) continue;
      for (const Entry& e : closes_[s]) {
        if (a_.sort_of(e.from) != inner) continue;
        int y = local(e.from), j = local(e.to);
        for (std::size_t i = 0; i < no; ++i)
          if (!k_.is_zero(tmp[i][y])) m[i][j] = k_.add(m[i][j], k_.mul(tmp[i][y], e.w));
      }
    }
    return m;
  }

  Matrix multiply(const Matrix& x, const Matrix& y) {
    const std::size_t n = x.size();
    Matrix m(n, std::vector<Weight>(n, k_.zero()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (k_.is_zero(x[i][l])) continue;
        for (std::size_t j = 0; j < n; ++j) m[i][j] = k_.add(m[i][j], k_.mul(x[i][l], y[l][j]));
      }
    return m;
  }

  Matrix rule2(const Text& t) {
    Decomposition d = decompose(t);
    Matrix acc;
    bool first = true;
    for (const Interval& b : d.blocks) {
      Text f = t.factor(b.lo, b.hi);
      Matrix m = f.size() == 1 ? letter(f.label(1), d.sort) : wrap(rule2(f), opposite(d.sort));
      acc = first ? std::move(m) : multiply(acc, m);
      first = false;
    }
    return acc;
  }

  const Wpa& a_;
  const Semiring& k_;
  std::vector<std::vector<Entry>> opens_, closes_;
};

}  // namespace

std::vector<WpaRun> wpa_runs(const Wpa& a, const Text& t, const Limits& limits) {
  if (t.size() > limits.max_run_length)
    throw GuardError("run enumeration on a text of length " + std::to_string(t.size()) + " exceeds the bound");
  return RunEnumerator(a, limits).all(t);
}

Weight wpa_behavior_runs(const Wpa& a, const Text& t, const Limits& limits) {
  const Semiring& k = a.semiring();
  Weight total = k.zero();
  for (const WpaRun& r : wpa_runs(a, t, limits))
    total = k.add(total, k.mul(k.mul(a.lambda(r.initial), r.weight), a.gamma(r.final)));
  return total;
}

Weight wpa_behavior(const Wpa& a, const Text& t) { return BehaviorDp(a).top(t); }

}  // namespace nestweight
