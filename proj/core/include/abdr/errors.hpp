#pragma once

#include <stdexcept>
#include <string>

namespace abdr {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A named column is missing or the file layout is wrong.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A cell failed to parse; the message carries the row index.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Dataset invariants do not hold for the requested operation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Weighted design matrix is rank deficient.
class SingularFitError : public Error {
 public:
  using Error::Error;
};

/// Logistic fit diverged; message names the offending covariate.
class SeparationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Matching ran out of control units.
class PoolExhaustedError : public Error {
 public:
  using Error::Error;
};

}  // namespace abdr
