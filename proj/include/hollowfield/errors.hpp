#pragma once

#include <stdexcept>
#include <string>

namespace hollowfield {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point coincides with a field singularity (source position or
/// the Hankel radius floor).
class SingularPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidSchemeError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatchError : public Error {
 public:
  using Error::Error;
};

/// Iterative numerical procedure failed to converge or produced non-finite
/// output.
class NumericError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hollowfield
