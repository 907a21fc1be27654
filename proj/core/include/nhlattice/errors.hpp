#pragma once

#include <stdexcept>
#include <string>

namespace nhl {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a documented precondition or type invariant.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed (eigensolver, root search, consistency check).
class ComputationError : public Error {
 public:
  using Error::Error;
};

/// Amplitudes left the representable range during time stepping.
class OverflowError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// A quantity is mathematically undefined for the given input (e.g. the
/// center of mass of a zero-norm state).
class UndefinedValueError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class RootNotFoundError : public ComputationError {
 public:
  RootNotFoundError(const std::string& what, double residual, int iterations)
      : ComputationError(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nhl
