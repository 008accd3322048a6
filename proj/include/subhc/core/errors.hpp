#pragma once

#include <stdexcept>
#include <string>

namespace subhc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different sequence spaces (bilateral vs unilateral) or
/// have different direct-sum arity.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// A negative power or inverse was requested from a non-invertible operator.
class NotInvertible : public Error {
 public:
  using Error::Error;
};

/// An operation precondition does not hold for the given arguments.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The operator expression has a shape the requested operation cannot handle.
class UnsupportedShape : public Error {
 public:
  using Error::Error;
};

/// Orbit support grew beyond the configured cap.
class SupportOverflow : public Error {
 public:
  using Error::Error;
};

/// A construction failed its own built-in verification.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unresolvable configuration input. `path` is a JSON pointer
/// to the offending value ("" when unknown); `line` is 1-based, 0 when unknown.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::string path = {}, int line = 0)
      : Error(what), path_(std::move(path)), line_(line) {}

  const std::string& path() const { return path_; }
  int line() const { return line_; }

 private:
  std::string path_;
  int line_;
};

}  // namespace subhc
