#pragma once

#include <string>

#include "nestweight/json_io.hpp"

namespace testing_support {

inline std::string data_path(const std::string& name) { return std::string(NESTWEIGHT_DATA_DIR) + "/" + name; }

inline nestweight::Json data(const std::string& name) { return nestweight::read_json_file(data_path(name)); }

// Motzkin numbers by the first-step recurrence, independent of any enumerator.
inline long long motzkin(int n) {
  std::vector<long long> m(n + 2, 0);
  m[0] = 1;
  for (int k = 1; k <= n; ++k) {
    m[k] = m[k - 1];
    for (int j = 0; j + 2 <= k; ++j) m[k] += m[j] * m[k - 2 - j];
  }
  return m[n];
}

}  // namespace testing_support
