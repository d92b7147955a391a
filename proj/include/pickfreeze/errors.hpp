#pragma once

#include <stdexcept>

namespace pickfreeze {

// Exception taxonomy shared by all modules. Configuration mistakes
// (ParameterError, DesignError) are kept apart from run-time numerical
// failures so the CLI can map them to different exit codes.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// invalid distribution or algorithm parameter
struct ParameterError : Error {
  using Error::Error;
};

// malformed subset design or mismatched sample shapes
struct DesignError : Error {
  using Error::Error;
};

// an estimator denominator is numerically zero (constant model output)
struct DegenerateError : Error {
  using Error::Error;
};

// function evaluated outside its domain
struct DomainError : Error {
  using Error::Error;
};

// a closed-form bound is undefined at an excluded boundary point
struct BoundaryError : Error {
  using Error::Error;
};

// generic numerical failure (non-finite intermediate, failed inversion)
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace pickfreeze
