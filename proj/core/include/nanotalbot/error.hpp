#pragma once

#include <stdexcept>
#include <string>

namespace nanotalbot {

/// Raised when an input record violates its documented invariants.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot meet its accuracy contract
/// (truncation caps, quadrature budgets, grid resolution, fit divergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace detail
}  // namespace nanotalbot
