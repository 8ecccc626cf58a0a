#pragma once
#include <stdexcept>
#include <string>

namespace kerrcat {

// Fock truncation too small for the requested state or propagator.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A physical precondition of the model does not hold (overdamped transfer,
// non-positive mass, zero force ...). The CLI maps these to exit status 3.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Quadrature grid or integrator failed its own consistency check.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two-peak coin model pushed far outside [0, 1].
class ModelBreakdownError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kerrcat
