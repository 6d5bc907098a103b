#pragma once

#include <stdexcept>
#include <string>

namespace legendre {

// Inputs of incompatible dimensions.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation's stated precondition does not hold numerically.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Quadrature, Newton or fitting did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace legendre
