#include "nestweight/nested_word.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "nestweight/error.hpp"

namespace nestweight {

Word split_word(std::string_view text) {
  Word w;
  bool has_space = std::any_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (!has_space) {
    for (char c : text) w.emplace_back(1, c);
    return w;
  }
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) w.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) w.push_back(cur);
  return w;
}

std::string join_word(const Word& w) {
  bool single = std::all_of(w.begin(), w.end(), [](const Symbol& s) { return s.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!single && i > 0) out += ' ';
    out += w[i];
  }
  return out;
}

NestedWord::NestedWord(Word letters, std::vector<Arc> arcs) : letters_(std::move(letters)), arcs_(std::move(arcs)) {
  const int n = size();
  if (n == 0) throw InputError("nested word must be nonempty");
  std::sort(arcs_.begin(), arcs_.end());
  partner_.assign(n + 1, 0);
  for (const Arc& a : arcs_) {
    if (a.call < 1 || a.ret > n || a.ret < 1 || a.call > n)
      throw InputError("arc (" + std::to_string(a.call) + "," + std::to_string(a.ret) + ") is out of range");
    if (a.call >= a.ret)
      throw InputError("invalid arc (" + std::to_string(a.call) + "," + std::to_string(a.ret) +
                       "): call must precede return");
    if (partner_[a.call] != 0 || partner_[a.ret] != 0)
      throw InputError("invalid arc (" + std::to_string(a.call) + "," +
                       std::to_string(a.ret) + "): endpoint shared with another arc");
    partner_[a.call] = a.ret;
    partner_[a.ret] = a.call;
  }
  for (std::size_t x = 0; x < arcs_.size(); ++x)
    for (std::size_t y = 0; y < arcs_.size(); ++y) {
      const Arc& a = arcs_[x];
      const Arc& b = arcs_[y];
      if (a.call < b.call && b.call < a.ret && a.ret < b.ret)
        throw InputError("crossing arcs (" + std::to_string(a.call) + "," + std::to_string(a.ret) +
                         ") and (" + std::to_string(b.call) + "," + std::to_string(b.ret) + ")");
    }
}

PositionKind NestedWord::kind(int i) const {
  if (partner_[i] == 0) return PositionKind::internal;
  return partner_[i] > i ? PositionKind::call : PositionKind::ret;
}

int NestedWord::depth(int i) const {
  int d = 0;
  for (const Arc& a : arcs_)
    if (a.call <= i && i < a.ret) ++d;
  return d;
}

int NestedWord::depth() const {
  int best = 0;
  for (int i = 1; i <= size(); ++i) best = std::max(best, depth(i));
  return best;
}

NestedWord NestedWord::factor(int i, int j) const {
  if (i < 1 || j > size() || i > j) throw InputError("factor window out of range");
  Word w(letters_.begin() + (i - 1), letters_.begin() + j);
  std::vector<Arc> arcs;
  for (const Arc& a : arcs_)
    if (a.call >= i && a.ret <= j) arcs.push_back({a.call - i + 1, a.ret - i + 1});
  return NestedWord(std::move(w), std::move(arcs));
}

std::vector<Arc> NestedWord::surface_arches() const {
  std::vector<Arc> out;
  int i = 1;
  while (i <= size()) {
    if (kind(i) == PositionKind::call) {
      out.push_back({i, partner_[i]});
      i = partner_[i] + 1;
    } else {
      ++i;
    }
  }
  return out;
}

bool operator<(const NestedWord& a, const NestedWord& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  if (a.letters_ != b.letters_) return a.letters_ < b.letters_;
  return a.arcs_ < b.arcs_;
}

std::vector<std::vector<Arc>> enumerate_nestings(int n, const Limits& limits) {
  if (n < 0) throw InputError("negative length");
  if (n > limits.max_nesting_length)
    throw GuardError("nesting enumeration of length " + std::to_string(n) + " exceeds the bound " +
                     std::to_string(limits.max_nesting_length));
  // table[len] holds the nestings of positions 1..len.
  std::vector<std::vector<std::vector<Arc>>> table(n + 1);
  table[0] = {{}};
  auto shifted = [](const std::vector<Arc>& arcs, int by) {
    std::vector<Arc> out;
    for (const Arc& a : arcs) out.push_back({a.call + by, a.ret + by});
    return out;
  };
  for (int len = 1; len <= n; ++len) {
    auto& out = table[len];
    // position 1 internal
    for (const auto& rest : table[len - 1]) out.push_back(shifted(rest, 1));
    // position 1 matched with j
    for (int j = 2; j <= len; ++j)
      for (const auto& inner : table[j - 2])
        for (const auto& rest : table[len - j]) {
          std::vector<Arc> arcs{{1, j}};
          for (const Arc& a : shifted(inner, 1)) arcs.push_back(a);
          for (const Arc& a : shifted(rest, j)) arcs.push_back(a);
          std::sort(arcs.begin(), arcs.end());
          out.push_back(std::move(arcs));
        }
  }
  auto result = table[n];
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<Word> enumerate_words(const std::vector<Symbol>& alphabet, int n, std::size_t max_count) {
  std::vector<Word> out;
  if (alphabet.empty()) {
    if (n == 0) out.push_back({});
    return out;
  }
  std::vector<Symbol> sorted = alphabet;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  double count = 1;
  for (int i = 0; i < n; ++i) count *= static_cast<double>(sorted.size());
  if (count > static_cast<double>(max_count))
    throw GuardError("word enumeration of length " + std::to_string(n) + " exceeds the bound");
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Word w;
    for (int i = 0; i < n; ++i) w.push_back(sorted[idx[i]]);
    out.push_back(std::move(w));
    int p = n - 1;
    while (p >= 0 && ++idx[p] == sorted.size()) idx[p--] = 0;
    if (p < 0) break;
  }
  return out;
}

std::vector<NestedWord> enumerate_nested_words(const std::vector<Symbol>& alphabet, int n, const Limits& limits) {
  auto nestings = enumerate_nestings(n, limits);
  auto words = enumerate_words(alphabet, n, static_cast<std::size_t>(limits.max_words));
  if (static_cast<double>(nestings.size()) * static_cast<double>(words.size()) > limits.max_words)
    throw GuardError("nested word enumeration of length " + std::to_string(n) + " exceeds the bound");
  std::vector<NestedWord> out;
  for (const auto& w : words)
    for (const auto& arcs : nestings) out.emplace_back(w, arcs);
  return out;
}

}  // namespace nestweight
