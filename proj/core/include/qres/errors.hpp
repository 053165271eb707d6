#pragma once

#include <stdexcept>
#include <string>

namespace qres {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range sizes or invalid configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent shapes, indices or missing pieces of a structure.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Bad numeric input (non-finite values, mismatched lengths, empty sets).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Invalid dataset or component specification.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// A trainable gate whose derivative the adjoint pass cannot form.
class UnsupportedGateError : public Error {
 public:
  using Error::Error;
};

}  // namespace qres
