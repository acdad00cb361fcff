#include "nestweight/wnwa.hpp"

#include <algorithm>
#include <functional>
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

// Dense accumulator that remembers which slots were touched.
class Accumulator {
 public:
  Accumulator(const Semiring& k, int n) : k_(k), vals_(n, k.zero()), used_(n, 0) {}
  void add(int i, const Weight& w) {
    if (!used_[i]) {
      used_[i] = 1;
      touched_.push_back(i);
      vals_[i] = w;
    } else {
      vals_[i] = k_.add(vals_[i], w);
    }
  }
  std::vector<std::pair<int, Weight>> take() {
    std::sort(touched_.begin(), touched_.end());
    std::vector<std::pair<int, Weight>> out;
    for (int i : touched_)
      if (!k_.is_zero(vals_[i])) out.emplace_back(i, vals_[i]);
    return out;
  }

 private:
  const Semiring& k_;
  std::vector<Weight> vals_;
  std::vector<char> used_;
  std::vector<int> touched_;
};

}  // namespace

Wnwa::Wnwa(Semiring semiring, std::vector<std::string> states) : semiring_(semiring) {
  for (auto& s : states) add_state(s);
}

int Wnwa::add_state(const std::string& name) {
  if (index_.count(name)) throw InputError("duplicate state '" + name + "'");
  index_[name] = num_states();
  states_.push_back(name);
  return num_states() - 1;
}

int Wnwa::state_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw InputError("unknown state '" + name + "'");
  return it->second;
}

void Wnwa::check_state(int q) const {
  if (q < 0 || q >= num_states()) throw InputError("state index out of range");
}

std::vector<Symbol> Wnwa::alphabet() const {
  std::set<Symbol> s(declared_.begin(), declared_.end());
  for (const auto& [key, w] : int_) s.insert(std::get<1>(key));
  for (const auto& [key, w] : call_) s.insert(std::get<1>(key));
  for (const auto& [key, w] : ret_) s.insert(std::get<2>(key));
  return {s.begin(), s.end()};
}

void Wnwa::add_initial(int q, const Weight& w) {
  check_state(q);
  accumulate(semiring_, iota_, q, w);
}
void Wnwa::add_final(int q, const Weight& w) {
  check_state(q);
  accumulate(semiring_, kappa_, q, w);
}
void Wnwa::add_internal(int p, const Symbol& a, int q, const Weight& w) {
  check_state(p);
  check_state(q);
  accumulate(semiring_, int_, IntKey{p, a, q}, w);
}
void Wnwa::add_call(int p, const Symbol& a, int q, const Weight& w) {
  check_state(p);
  check_state(q);
  accumulate(semiring_, call_, IntKey{p, a, q}, w);
}
void Wnwa::add_return(int p, int lookback, const Symbol& a, int q, const Weight& w) {
  check_state(p);
  check_state(lookback);
  check_state(q);
  accumulate(semiring_, ret_, RetKey{p, lookback, a, q}, w);
}

Weight Wnwa::initial(int q) const { return lookup(semiring_, iota_, q); }
Weight Wnwa::final_weight(int q) const { return lookup(semiring_, kappa_, q); }
Weight Wnwa::internal(int p, const Symbol& a, int q) const { return lookup(semiring_, int_, IntKey{p, a, q}); }
Weight Wnwa::call(int p, const Symbol& a, int q) const { return lookup(semiring_, call_, IntKey{p, a, q}); }
Weight Wnwa::ret(int p, int lookback, const Symbol& a, int q) const {
  return lookup(semiring_, ret_, RetKey{p, lookback, a, q});
}

Weight run_weight(const Wnwa& a, const NestedWord& nw, const std::vector<int>& run) {
  const Semiring& k = a.semiring();
  if (static_cast<int>(run.size()) != nw.size() + 1) throw InputError("run length must be word length + 1");
  Weight w = a.initial(run[0]);
  for (int i = 1; i <= nw.size() && !k.is_zero(w); ++i) {
    const Symbol& s = nw.letter(i);
    switch (nw.kind(i)) {
      case PositionKind::internal: w = k.mul(w, a.internal(run[i - 1], s, run[i])); break;
      case PositionKind::call: w = k.mul(w, a.call(run[i - 1], s, run[i])); break;
      case PositionKind::ret: w = k.mul(w, a.ret(run[i - 1], run[nw.partner(i) - 1], s, run[i])); break;
    }
  }
  return k.mul(w, a.final_weight(run[nw.size()]));
}

Weight behavior_bruteforce(const Wnwa& a, const NestedWord& nw, const Limits& limits) {
  const Semiring& k = a.semiring();
  const int n = nw.size();
  const int q = a.num_states();
  double runs = 1;
  for (int i = 0; i <= n; ++i) runs *= q;
  if (runs > static_cast<double>(limits.max_runs))
    throw GuardError("brute-force run enumeration exceeds the bound");
  Weight total = k.zero();
  std::vector<int> run(n + 1, 0);
  if (q == 0) return total;
  // Enumerates every sequence; a zero prefix contributes zero to each extension.
  std::function<void(int, const Weight&)> rec = [&](int i, const Weight& w) {
    if (i > n) {
      total = k.add(total, k.mul(w, a.final_weight(run[n])));
      return;
    }
    const Symbol& s = nw.letter(i);
    for (int st = 0; st < q; ++st) {
      run[i] = st;
      Weight t = k.zero();
      switch (nw.kind(i)) {
        case PositionKind::internal: t = a.internal(run[i - 1], s, st); break;
        case PositionKind::call: t = a.call(run[i - 1], s, st); break;
        case PositionKind::ret: t = a.ret(run[i - 1], run[nw.partner(i) - 1], s, st); break;
      }
      if (k.is_zero(t)) continue;
      rec(i + 1, k.mul(w, t));
    }
  };
  for (int st = 0; st < q; ++st) {
    Weight w = a.initial(st);
    if (k.is_zero(w)) continue;
    run[0] = st;
    rec(1, w);
  }
  return total;
}

WnwaEvaluator::WnwaEvaluator(const Wnwa& a) : a_(a), k_(a.semiring()), q_(a.num_states()) {
  for (const Symbol& s : a.alphabet()) sym_.emplace(s, static_cast<int>(sym_.size()));
  const std::size_t m = sym_.size();
  int_out_.assign(m, std::vector<Vec>(q_));
  call_out_.assign(m, std::vector<Vec>(q_));
  ret_out_.assign(m, {});
  for (const auto& [key, w] : a.internals())
    int_out_[sym_.at(std::get<1>(key))][std::get<0>(key)].emplace_back(std::get<2>(key), w);
  for (const auto& [key, w] : a.calls())
    call_out_[sym_.at(std::get<1>(key))][std::get<0>(key)].emplace_back(std::get<2>(key), w);
  for (const auto& [key, w] : a.returns()) {
    long long idx = static_cast<long long>(std::get<0>(key)) * q_ + std::get<1>(key);
    ret_out_[sym_.at(std::get<2>(key))][idx].emplace_back(std::get<3>(key), w);
  }
}

int WnwaEvaluator::symbol(const Symbol& a) const {
  auto it = sym_.find(a);
  return it == sym_.end() ? -1 : it->second;
}

const WnwaEvaluator::Vec& WnwaEvaluator::inner_row(int k, int state) {
  auto key = std::make_pair(k, state);
  auto it = rows_.find(key);
  if (it != rows_.end()) return it->second;
  Vec e{{state, k_.one()}};
  int l = nw_->partner(k);
  Vec row = l - 1 >= k + 1 ? apply_segment(e, k + 1, l - 1) : e;
  return rows_.emplace(key, std::move(row)).first->second;
}

WnwaEvaluator::Vec WnwaEvaluator::apply_segment(const Vec& start, int i, int j) {
  Vec v = start;
  int p = i;
  while (p <= j && !v.empty()) {
    const int a = letter_ids_[p];
    Accumulator acc(k_, q_);
    if (a < 0) return {};
    if (nw_->kind(p) == PositionKind::internal) {
      for (const auto& [s, w] : v)
        for (const auto& [t, wt] : int_out_[a][s]) acc.add(t, k_.mul(w, wt));
      v = acc.take();
      ++p;
      continue;
    }
    const int l = nw_->partner(p);
    const int b = letter_ids_[l];
    if (b < 0) return {};
    const auto& rets = ret_out_[b];
    for (const auto& [s, w] : v)
      for (const auto& [qk, wc] : call_out_[a][s]) {
        const Weight wsc = k_.mul(w, wc);
        for (const auto& [ql, wi] : inner_row(p, qk)) {
          auto it = rets.find(static_cast<long long>(ql) * q_ + s);
          if (it == rets.end()) continue;
          const Weight wsi = k_.mul(wsc, wi);
          for (const auto& [t, wr] : it->second) acc.add(t, k_.mul(wsi, wr));
        }
      }
    v = acc.take();
    p = l + 1;
  }
  return p > j ? v : Vec{};
}

Weight WnwaEvaluator::operator()(const NestedWord& nw) {
  nw_ = &nw;
  rows_.clear();
  letter_ids_.assign(nw.size() + 1, -1);
  for (int i = 1; i <= nw.size(); ++i) letter_ids_[i] = symbol(nw.letter(i));
  Vec v;
  for (const auto& [q, w] : a_.initials()) v.emplace_back(q, w);
  Vec out = apply_segment(v, 1, nw.size());
  Weight total = k_.zero();
  for (const auto& [q, w] : out) total = k_.add(total, k_.mul(w, a_.final_weight(q)));
  nw_ = nullptr;
  rows_.clear();
  return total;
}

Weight behavior(const Wnwa& a, const NestedWord& nw) { return WnwaEvaluator(a)(nw); }

Wnwa hadamard(const Wnwa& a, const Wnwa& b) {
  if (!(a.semiring() == b.semiring())) throw InputError("hadamard product of automata over different semirings");
  const Semiring& k = a.semiring();
  const int nb = b.num_states();
  Wnwa c(k, {});
  for (int p = 0; p < a.num_states(); ++p)
    for (int q = 0; q < nb; ++q) c.add_state("(" + a.states()[p] + "," + b.states()[q] + ")");
  auto id = [nb](int p, int q) { return p * nb + q; };
  for (const auto& [p, wa] : a.initials())
    for (const auto& [q, wb] : b.initials()) c.add_initial(id(p, q), k.mul(wa, wb));
  for (const auto& [p, wa] : a.finals())
    for (const auto& [q, wb] : b.finals()) c.add_final(id(p, q), k.mul(wa, wb));
  for (const auto& [ka, wa] : a.internals())
    for (const auto& [kb, wb] : b.internals())
      if (std::get<1>(ka) == std::get<1>(kb))
        c.add_internal(id(std::get<0>(ka), std::get<0>(kb)), std::get<1>(ka), id(std::get<2>(ka), std::get<2>(kb)),
                       k.mul(wa, wb));
  for (const auto& [ka, wa] : a.calls())
    for (const auto& [kb, wb] : b.calls())
      if (std::get<1>(ka) == std::get<1>(kb))
        c.add_call(id(std::get<0>(ka), std::get<0>(kb)), std::get<1>(ka), id(std::get<2>(ka), std::get<2>(kb)),
                   k.mul(wa, wb));
  for (const auto& [ka, wa] : a.returns())
    for (const auto& [kb, wb] : b.returns())
      if (std::get<2>(ka) == std::get<2>(kb))
        c.add_return(id(std::get<0>(ka), std::get<0>(kb)), id(std::get<1>(ka), std::get<1>(kb)), std::get<2>(ka),
                     id(std::get<3>(ka), std::get<3>(kb)), k.mul(wa, wb));
  return c;
}

Wnwa disjoint_sum(const Wnwa& a, const Wnwa& b) {
  if (!(a.semiring() == b.semiring())) throw InputError("sum of automata over different semirings");
  Wnwa c(a.semiring(), {});
  for (const auto& s : a.states()) c.add_state("1:" + s);
  for (const auto& s : b.states()) c.add_state("2:" + s);
  auto copy = [&c](const Wnwa& x, int off) {
    for (const auto& [q, w] : x.initials()) c.add_initial(q + off, w);
    for (const auto& [q, w] : x.finals()) c.add_final(q + off, w);
    for (const auto& [key, w] : x.internals())
      c.add_internal(std::get<0>(key) + off, std::get<1>(key), std::get<2>(key) + off, w);
    for (const auto& [key, w] : x.calls())
      c.add_call(std::get<0>(key) + off, std::get<1>(key), std::get<2>(key) + off, w);
    for (const auto& [key, w] : x.returns())
      c.add_return(std::get<0>(key) + off, std::get<1>(key) + off, std::get<2>(key), std::get<3>(key) + off, w);
  };
  copy(a, 0);
  copy(b, a.num_states());
  for (const auto& s : a.alphabet()) c.declare_symbol(s);
  for (const auto& s : b.alphabet()) c.declare_symbol(s);
  return c;
}

Wnwa scale(const Weight& k, const Wnwa& a) {
  const Semiring& s = a.semiring();
  Wnwa c(s, a.states());
  for (const auto& [q, w] : a.initials()) c.add_initial(q, s.mul(k, w));
  for (const auto& [q, w] : a.finals()) c.add_final(q, w);
  for (const auto& [key, w] : a.internals()) c.add_internal(std::get<0>(key), std::get<1>(key), std::get<2>(key), w);
  for (const auto& [key, w] : a.calls()) c.add_call(std::get<0>(key), std::get<1>(key), std::get<2>(key), w);
  for (const auto& [key, w] : a.returns())
    c.add_return(std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key), w);
  for (const auto& s2 : a.alphabet()) c.declare_symbol(s2);
  return c;
}

Wnwa trim(const Wnwa& a) {
  const int n = a.num_states();
  std::vector<std::vector<int>> fwd(n), bwd(n);
  auto edge = [&](int p, int q) {
    fwd[p].push_back(q);
    bwd[q].push_back(p);
  };
  for (const auto& [key, w] : a.internals()) edge(std::get<0>(key), std::get<2>(key));
  for (const auto& [key, w] : a.calls()) edge(std::get<0>(key), std::get<2>(key));
  for (const auto& [key, w] : a.returns()) {
    edge(std::get<0>(key), std::get<3>(key));
    edge(std::get<1>(key), std::get<3>(key));
  }
  auto closure = [n](const std::vector<std::vector<int>>& g, std::vector<int> seeds) {
    std::vector<char> seen(n, 0);
    for (int s : seeds) seen[s] = 1;
    while (!seeds.empty()) {
      int p = seeds.back();
      seeds.pop_back();
      for (int q : g[p])
        if (!seen[q]) {
          seen[q] = 1;
          seeds.push_back(q);
        }
    }
    return seen;
  };
  std::vector<int> init, fin;
  for (const auto& [q, w] : a.initials()) init.push_back(q);
  for (const auto& [q, w] : a.finals()) fin.push_back(q);
  auto reach = closure(fwd, init);
  auto coreach = closure(bwd, fin);
  std::vector<int> remap(n, -1);
  Wnwa c(a.semiring(), {});
  for (int q = 0; q < n; ++q)
    if (reach[q] && coreach[q]) remap[q] = c.add_state(a.states()[q]);
  auto ok = [&remap](std::initializer_list<int> qs) {
    for (int q : qs)
      if (remap[q] < 0) return false;
    return true;
  };
  for (const auto& [q, w] : a.initials())
    if (ok({q})) c.add_initial(remap[q], w);
  for (const auto& [q, w] : a.finals())
    if (ok({q})) c.add_final(remap[q], w);
  for (const auto& [key, w] : a.internals())
    if (ok({std::get<0>(key), std::get<2>(key)}))
      c.add_internal(remap[std::get<0>(key)], std::get<1>(key), remap[std::get<2>(key)], w);
  for (const auto& [key, w] : a.calls())
    if (ok({std::get<0>(key), std::get<2>(key)}))
      c.add_call(remap[std::get<0>(key)], std::get<1>(key), remap[std::get<2>(key)], w);
  for (const auto& [key, w] : a.returns())
    if (ok({std::get<0>(key), std::get<1>(key), std::get<3>(key)}))
      c.add_return(remap[std::get<0>(key)], remap[std::get<1>(key)], std::get<2>(key), remap[std::get<3>(key)], w);
  for (const auto& s : a.alphabet()) c.declare_symbol(s);
  return c;
}

namespace {

std::vector<Symbol> union_alphabet(const Wnwa& a, const Wnwa* b) {
  std::set<Symbol> s;
  for (const auto& x : a.alphabet()) s.insert(x);
  if (b)
    for (const auto& x : b->alphabet()) s.insert(x);
  return {s.begin(), s.end()};
}

}  // namespace

std::optional<NestedWord> bounded_equiv(const Wnwa& a, const Wnwa& b, int max_len, const Limits& limits) {
  if (!(a.semiring() == b.semiring())) throw InputError("comparing automata over different semirings");
  auto alphabet = union_alphabet(a, &b);
  if (alphabet.empty()) return std::nullopt;
  WnwaEvaluator ea(a), eb(b);
  for (int n = 1; n <= max_len; ++n)
    for (const auto& nw : enumerate_nested_words(alphabet, n, limits))
      if (!(ea(nw) == eb(nw))) return nw;
  return std::nullopt;
}

std::optional<NestedWord> bounded_zero_test(const Wnwa& a, int max_len, const Limits& limits) {
  auto alphabet = union_alphabet(a, nullptr);
  if (alphabet.empty()) return std::nullopt;
  WnwaEvaluator ea(a);
  for (int n = 1; n <= max_len; ++n)
    for (const auto& nw : enumerate_nested_words(alphabet, n, limits))
      if (!a.semiring().is_zero(ea(nw))) return nw;
  return std::nullopt;
}

}  // namespace nestweight
