#pragma once

#include <stdexcept>
#include <string>

namespace lifshitz {

// Bad input: parameters, config fields, domain violations. The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iterative routine hit its cap. The CLI maps this to exit code 2.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace lifshitz
