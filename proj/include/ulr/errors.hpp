#pragma once

#include <stdexcept>
#include <string>

namespace ulr {

// Argument outside the mathematical domain of a function (|x| >= 1 for the
// Jacobi evaluator, x <= 0 for the Hankel function, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Index combination that does not exist, e.g. (m = 0, l = 2).
class InvalidIndexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed, missing or inconsistent input data (files, shapes, bandwidths).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public DataError {
 public:
  using DataError::DataError;
};

class BandwidthMismatchError : public DataError {
 public:
  using DataError::DataError;
};

class BasisBoundError : public DataError {
 public:
  using DataError::DataError;
};

// A numerical procedure failed its own post-condition.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : NumericalError(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class AssemblyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EigenResidualError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OrderingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EmptyCutoffError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ulr
