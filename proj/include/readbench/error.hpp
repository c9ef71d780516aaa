#pragma once

#include <stdexcept>
#include <string>

namespace readbench {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ratio or formula was requested with a zero denominator (no words, no sentences).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A token of the wrong class was passed where a word was expected.
class InvalidTokenError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration: bad option values, missing assets, wrong shot counts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data. `line()` is 1-based, 0 when unknown.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Correlation is undefined, e.g. one of the inputs is constant.
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

/// A judge completion did not contain a parseable label or score.
class UnparseableCompletionError : public Error {
 public:
  using Error::Error;
};

/// Transport-level failure talking to a chat endpoint. `status()` is the HTTP
/// status, or 0 for connection failures.
class EndpointError : public Error {
 public:
  EndpointError(const std::string& what, int status) : Error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

}  // namespace readbench
