#pragma once

#include <stdexcept>
#include <string>

namespace rdlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates a documented invariant (alpha < 1, negative mass, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A computation that cannot fail for valid inputs did fail.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// The inputs are valid but the requested result does not exist
/// (step size underflow, no informative samples, mass mismatch).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Configuration text could not be parsed. Carries the 1-based line number,
/// or 0 when the problem is not tied to a single line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rdlab
