#pragma once

#include <stdexcept>
#include <string>

namespace minkval {

/// A numerical procedure failed (no convergence, singular system, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The profile is not twice differentiable and cannot be treated as a body.
class UnsupportedProfile : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Some multiplier of the linearized map is (numerically) equal to one.
class SingularResolvent : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace minkval
