#pragma once

#include <stdexcept>
#include <string>

namespace tentpitch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simplex (or point/facet configuration) has no usable extent.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Structural problem in an input mesh: bad index, wrong arity, bad speed.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. The message carries the source line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// Parameters outside their admissible range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A front or mesh broke one of the algorithm's invariants.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// The pitcher could not advance a local minimum. Carries a diagnostic dump.
class StallError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not available for this dimension or format.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace tentpitch
