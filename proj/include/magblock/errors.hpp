#pragma once

#include <stdexcept>
#include <string>

namespace magblock {

/// Bad user input or an unsupported parameter regime. CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver could not produce a trustworthy result. CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reading or writing a file failed. CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidConfiguration : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidParameter : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnsupportedRegime : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Bad command-line usage, e.g. an unknown preset name.
class UsageError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SingularDenominator : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivisionByZero : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class Divergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoUniqueSteadyState : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Maps an exception to the CLI exit code (0 is never returned).
int exit_code_for(const std::exception& e) noexcept;

}  // namespace magblock
