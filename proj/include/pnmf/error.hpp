#pragma once

#include <stdexcept>
#include <string>

namespace pnmf {

// Precondition violation by the caller (bad rank, mismatched dimensions, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed external input (CSV, JSON spec). Message carries the location.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerically ill-defined result, e.g. the volume of a model with a zero
// rank-one part, or a solver that produced non-finite values.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pnmf
