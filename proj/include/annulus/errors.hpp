#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace annulus {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Rake/probe layout breaks an invariant (duplicate angles, unsorted radii, ...).
class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

/// The requested solve has no unique answer at working precision.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// File-level errors carry the offending line (1-based, 0 when unknown) and field.
class FileError : public Error {
 public:
  FileError(const std::string& kind, const std::string& message, std::size_t line,
            std::string field);

  const std::string& kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string kind_;
  std::size_t line_;
  std::string field_;
};

/// Malformed syntax: unreadable number, stray token.
class ParseError : public FileError {
 public:
  ParseError(const std::string& message, std::size_t line, std::string field = {})
      : FileError("parse", message, line, std::move(field)) {}
};

/// Well-formed text with missing fields or inconsistent shapes.
class SchemaError : public FileError {
 public:
  SchemaError(const std::string& message, std::size_t line, std::string field = {})
      : FileError("schema", message, line, std::move(field)) {}
};

/// Parsed data that violates a domain invariant.
class ValidationError : public FileError {
 public:
  ValidationError(const std::string& message, std::size_t line, std::string field = {})
      : FileError("validation", message, line, std::move(field)) {}
};

}  // namespace annulus
