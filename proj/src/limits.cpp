#include "nestweight/limits.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace nestweight {

Limits Limits::scaled(double factor) const {
  if (!(factor > 0)) return *this;
  Limits l = *this;
  auto scale_int = [factor](int v) { return static_cast<int>(std::lround(v * factor)); };
  l.max_nesting_length = scale_int(max_nesting_length);
  l.max_text_length = scale_int(max_text_length);
  l.max_run_length = scale_int(max_run_length);
  l.max_runs = static_cast<std::uint64_t>(static_cast<double>(max_runs) * factor);
  l.max_set_domain = scale_int(max_set_domain);
  l.max_words = scale_int(max_words);
  l.max_unfold_rounds = scale_int(max_unfold_rounds);
  l.max_trees = static_cast<std::uint64_t>(static_cast<double>(max_trees) * factor);
  return l;
}

Limits Limits::from_env() {
  const char* s = std::getenv("NESTWEIGHT_GUARD_SCALE");
  if (s == nullptr) return Limits{};
  try {
    return Limits{}.scaled(std::stod(s));
  } catch (...) {
    return Limits{};
  }
}

}  // namespace nestweight
