#pragma once

#include <stdexcept>
#include <string>

namespace subcert {

// Failure categories; the CLI maps each to a distinct exit code.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input data fails a documented precondition (exit 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A property the algorithms guarantee failed to hold; indicates an invalid
// input slipped through or a defect in this library (exit 3).
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure (exit 4).
class IoError : public Error {
 public:
  using Error::Error;
};

// File content is not in the expected format (exit 5).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Unusable command parameters (exit 6).
class ParamError : public Error {
 public:
  using Error::Error;
};

// Columns fail the orthonormality gate; carries the measured residual.
class OrthonormalityError : public ValidationError {
 public:
  OrthonormalityError(const std::string& msg, double residual)
      : ValidationError(msg), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Jacobi sweep cap reached without meeting the off-diagonal threshold.
class ConvergenceError : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

}  // namespace subcert
