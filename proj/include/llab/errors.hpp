#pragma once

#include <stdexcept>
#include <string>

namespace llab {

// Malformed or inadmissible user input (bad JSON, odd dimension, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An identity the engine relies on did not hold. Seeing one of these means
// a bug in this library, not bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace llab
