#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace warpcheck {

/// Base class of every error the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed DSL source. `offset()` is the byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// A name in DSL source that is neither a coordinate nor a function.
class UnknownVariableError : public ParseError {
 public:
  UnknownVariableError(const std::string& name, std::size_t offset)
      : ParseError("unknown variable '" + name + "'", offset), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Evaluation outside a function's domain (log of a negative, division by zero, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Value exists but the first or second derivative does not (e.g. cbrt at 0).
class NonDifferentiableError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SingularMetricError : public Error {
 public:
  using Error::Error;
};

class DegeneratePlaneError : public Error {
 public:
  using Error::Error;
};

class NonpositiveWarpingError : public Error {
 public:
  using Error::Error;
};

class SignatureUnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A sample box leaves the manifold's domain, or the sample spec is invalid.
class SamplingDomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid scenario file or command-line configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace warpcheck
