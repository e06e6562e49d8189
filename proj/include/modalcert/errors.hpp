#pragma once

#include <stdexcept>
#include <string>

namespace modalcert {

/// Malformed user input: formula text, index text, unknown world ids.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Formula or index text that does not parse. `column` is 1-based.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t column)
      : InputError(what + " at column " + std::to_string(column)), column_(column) {}
  [[nodiscard]] std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

/// Evidence file that is not valid JSON or violates the evidence schema.
class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

/// Evidence that parses but cannot be elaborated into a layer certificate
/// (dangling indices, broken modal correspondence, bijection violations).
class AdapterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured search or checking budget was exceeded.
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace modalcert
