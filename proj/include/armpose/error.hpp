#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace armpose {

enum class ErrorKind {
  InvalidSpec,
  UnsupportedDesign,
  InvalidRange,
  Parse,
  InvalidAxis,
  DimensionMismatch,
  LimitViolation,
  ShapeMismatch,
  InvalidProbability,
  OutOfBound,
  VersionMismatch,
  InvalidConfig,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base error for the library. The kind drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure; `line` is 1-based, 0 when not tied to a text line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::Parse,
              line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace armpose
