#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relatent {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
  syntax,
  unknown_name,
  arity_mismatch,
  duplicate,
  type_mismatch,
  bad_value,
};

// Raised for malformed schema, fact, or interpretation text. Line and column
// are 1-based; column 0 means "whole line".
class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, const std::string& what);

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
};

// Invalid run configuration (bad flag values, missing required options).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace relatent
