#pragma once

#include <stdexcept>
#include <string>

namespace canon {

// Argument outside the mathematical domain of a function (poles, branch cuts).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operation does not support the given measure or Hamiltonian variant.
class UnsupportedVariant : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data violates a model invariant (positivity, ordering, det > 0, ...).
class InvalidModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical procedure failed: step-size underflow, quadrature budget,
// singular linear system, tail bound above tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace canon
