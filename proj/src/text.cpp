#include "nestweight/text.hpp"

#include <algorithm>

#include "nestweight/error.hpp"

namespace nestweight {

namespace {

// Relative ranks of a contiguous block of positions; the block must be an
// interval of the second order as well.
bool split_block(const std::vector<int>& rank, int lo, int hi, Decomposition& out) {
  const int len = hi - lo + 1;
  int base = rank[lo];
  for (int i = lo; i <= hi; ++i) base = std::min(base, rank[i]);
  std::vector<int> hcut, vcut;
  int mx = -1, mn = len;
  for (int m = 1; m < len; ++m) {
    int r = rank[lo + m - 1] - base;
    mx = std::max(mx, r);
    mn = std::min(mn, r);
    if (mx == m - 1) hcut.push_back(lo + m - 1);
    if (mn == len - m) vcut.push_back(lo + m - 1);
  }
  const auto& cuts = !hcut.empty() ? hcut : vcut;
  if (cuts.empty()) return false;
  out.singleton = false;
  out.sort = !hcut.empty() ? Sort::horizontal : Sort::vertical;
  out.blocks.clear();
  int start = lo;
  for (int c : cuts) {
    out.blocks.push_back({start, c});
    start = c + 1;
  }
  out.blocks.push_back({start, hi});
  return true;
}

std::vector<int> ranks_of(const std::vector<int>& order2) {
  const int n = static_cast<int>(order2.size());
  std::vector<int> rank(n + 1, -1);
  for (int r = 0; r < n; ++r) {
    int p = order2[r];
    if (p < 1 || p > n || rank[p] != -1) throw InputError("second order is not a permutation of 1..n");
    rank[p] = r;
  }
  return rank;
}

bool alternating_rec(const std::vector<int>& rank, int lo, int hi) {
  if (lo == hi) return true;
  Decomposition d;
  if (!split_block(rank, lo, hi, d)) return false;
  for (const auto& b : d.blocks)
    if (!alternating_rec(rank, b.lo, b.hi)) return false;
  return true;
}

}  // namespace

Text::Text(Word labels, std::vector<int> order2) : labels_(std::move(labels)), order2_(std::move(order2)) {
  if (labels_.empty()) throw InputError("text must be nonempty");
  if (order2_.size() != labels_.size()) throw InputError("second order length differs from label count");
  rank2_ = ranks_of(order2_);
  if (!alternating_rec(rank2_, 1, size())) throw InputError("text is not alternating");
}

Text Text::factor(int i, int j) const {
  if (i < 1 || j > size() || i > j) throw InputError("factor window out of range");
  Word l(labels_.begin() + (i - 1), labels_.begin() + j);
  std::vector<int> o;
  for (int p : order2_)
    if (p >= i && p <= j) o.push_back(p - i + 1);
  return Text(std::move(l), std::move(o));
}

Text compose(Sort sort, const std::vector<Text>& factors) {
  if (factors.empty()) throw InputError("composition needs at least one factor");
  Word labels;
  std::vector<std::vector<int>> blocks;
  int offset = 0;
  for (const Text& t : factors) {
    labels.insert(labels.end(), t.labels().begin(), t.labels().end());
    std::vector<int> b;
    for (int p : t.order2()) b.push_back(p + offset);
    blocks.push_back(std::move(b));
    offset += t.size();
  }
  if (sort == Sort::vertical) std::reverse(blocks.begin(), blocks.end());
  std::vector<int> order;
  for (const auto& b : blocks) order.insert(order.end(), b.begin(), b.end());
  return Text(std::move(labels), std::move(order));
}

Decomposition decompose(const Text& t) {
  Decomposition d;
  if (t.size() == 1) {
    d.singleton = true;
    d.blocks = {{1, 1}};
    return d;
  }
  std::vector<int> rank(t.size() + 1);
  for (int i = 1; i <= t.size(); ++i) rank[i] = t.rank2(i);
  if (!split_block(rank, 1, t.size(), d)) throw InputError("text is not alternating");
  return d;
}

bool is_alternating(const std::vector<int>& order2) {
  if (order2.empty()) throw InputError("empty permutation");
  auto rank = ranks_of(order2);
  return alternating_rec(rank, 1, static_cast<int>(order2.size()));
}

std::vector<Interval> clans(const Text& t) {
  std::vector<Interval> out;
  for (int i = 1; i <= t.size(); ++i) {
    int mn = t.rank2(i), mx = t.rank2(i);
    for (int j = i; j <= t.size(); ++j) {
      mn = std::min(mn, t.rank2(j));
      mx = std::max(mx, t.rank2(j));
      if (mx - mn == j - i) out.push_back({i, j});
    }
  }
  return out;
}

std::vector<Interval> prime_clans(const Text& t) {
  auto all = clans(t);
  std::vector<Interval> out;
  for (const auto& c : all) {
    bool prime = true;
    for (const auto& d : all)
      if ((d.lo < c.lo && c.lo <= d.hi && d.hi < c.hi) || (c.lo < d.lo && d.lo <= c.hi && c.hi < d.hi)) {
        prime = false;
        break;
      }
    if (prime) out.push_back(c);
  }
  return out;
}

namespace {

// Alternating permutations of n positions whose top-level product is not of
// sort `forbidden` (pass nullopt for no restriction).
std::vector<std::vector<int>> tdo_rec(int n, std::optional<Sort> forbidden) {
  if (n == 1) return {{1}};
  std::vector<std::vector<int>> out;
  for (Sort s : {Sort::horizontal, Sort::vertical}) {
    if (forbidden && *forbidden == s) continue;
    // Every composition of n into at least two parts.
    std::vector<int> parts;
    auto emit = [&](auto&& self, int left) -> void {
      if (left == 0) {
        if (parts.size() < 2) return;
        std::vector<std::vector<std::vector<int>>> options;
        for (int p : parts) options.push_back(tdo_rec(p, s));
        std::vector<std::size_t> pick(parts.size(), 0);
        while (true) {
          std::vector<std::vector<int>> blocks;
          int offset = 0;
          for (std::size_t f = 0; f < parts.size(); ++f) {
            std::vector<int> b;
            for (int x : options[f][pick[f]]) b.push_back(x + offset);
            blocks.push_back(std::move(b));
            offset += parts[f];
          }
          if (s == Sort::vertical) std::reverse(blocks.begin(), blocks.end());
          std::vector<int> perm;
          for (const auto& b : blocks) perm.insert(perm.end(), b.begin(), b.end());
          out.push_back(std::move(perm));
          std::size_t f = 0;
          while (f < pick.size() && ++pick[f] == options[f].size()) pick[f++] = 0;
          if (f == pick.size()) break;
        }
        return;
      }
      for (int p = 1; p <= left; ++p) {
        parts.push_back(p);
        self(self, left - p);
        parts.pop_back();
      }
    };
    emit(emit, n);
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> enumerate_tdo(int n, const Limits& limits) {
  if (n < 1) throw InputError("text length must be positive");
  if (n > limits.max_text_length)
    throw GuardError("text enumeration of length " + std::to_string(n) + " exceeds the bound " +
                     std::to_string(limits.max_text_length));
  auto out = tdo_rec(n, std::nullopt);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Text> enumerate_texts(const Word& labels, const Limits& limits) {
  std::vector<Text> out;
  for (auto& perm : enumerate_tdo(static_cast<int>(labels.size()), limits)) out.emplace_back(labels, perm);
  return out;
}

}  // namespace nestweight
