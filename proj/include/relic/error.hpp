#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relic {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a precondition (bad arguments, empty inputs, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. `line` is 1-based, `column` 1-based (0 if unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

// Well-formed syntax carrying invalid content (identifier layout, non-ground facts).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid DLAB grammar (min > max, ...).
class BiasError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace relic
