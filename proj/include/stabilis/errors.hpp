#pragma once

#include <stdexcept>
#include <string>

namespace stabilis {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

/// An enclosure was too wide to decide the rounding; re-evaluate with more
/// guard bits.
class EnclosureTooWide : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Input outside the domain of a function, or an operation undefined for the
/// given arguments (infinite distance pair, negative square root, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace stabilis
