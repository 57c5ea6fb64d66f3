#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epq {

/// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula or structure text. Carries 1-based line/column.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, std::size_t column, const std::string& message)
      : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        source_(std::move(source)),
        line_(line),
        column_(column) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string source_;
  std::size_t line_;
  std::size_t column_;
};

class SignatureMismatch : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// An oracle returned values no consistent count could produce
/// (non-integral solution, inexact division, out-of-range total).
class OracleInconsistency : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// A bounded search gave up before finding what it was looking for.
class SearchExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace epq
