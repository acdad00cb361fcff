#pragma once

#include <stdexcept>
#include <string>

namespace nestweight {

// Malformed input: bad tokens, invalid nestings, ill-typed formulas.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration or brute-force computation would exceed its configured bound.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nestweight
