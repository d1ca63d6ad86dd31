#pragma once

#include <stdexcept>
#include <string>

namespace rfeh {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A model or dataset violates one of its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A constrained fit could not reach the configured residual tolerance.
class FitInfeasibleError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical method exhausted its budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Circular convolution would wrap probability mass around the FFT buffer.
class AliasingError : public Error {
 public:
  using Error::Error;
};

/// Probability mass falls outside the discretization grid.
class SupportOverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace rfeh
