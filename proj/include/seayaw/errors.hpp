#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seayaw {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument's value was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Normalization of an all-zero (or non-positive) weight vector.
class DegenerateDistribution : public Error {
 public:
  using Error::Error;
};

/// Circular mean requested for a near-zero resultant vector.
class UndefinedMean : public Error {
 public:
  using Error::Error;
};

/// Two distributions on different grids were combined.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A back-projected ray does not hit the water plane.
class NoIntersection : public Error {
 public:
  using Error::Error;
};

/// The trajectory baseline cannot produce a heading for a stationary track.
class UndefinedHeading : public Error {
 public:
  using Error::Error;
};

/// The trajectory baseline has fewer samples than it needs.
class InsufficientHistory : public Error {
 public:
  using Error::Error;
};

/// Empty input to an aggregate that requires at least one element.
class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration, scenario or command-line value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A malformed record in a JSON / JSONL stream.
class SchemaError : public Error {
 public:
  SchemaError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace seayaw
