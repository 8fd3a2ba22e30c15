#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dynrel {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed JSON; `offset` is the byte position reported by the reader.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Well-formed JSON that is not a recognised log dialect.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Reference-integrity failures in a log. `offenders` names every bad id.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::vector<std::string> offenders)
      : Error(join(what, offenders)), offenders_(std::move(offenders)) {}

  const std::vector<std::string>& offenders() const noexcept { return offenders_; }

 private:
  static std::string join(const std::string& what, const std::vector<std::string>& ids) {
    std::string out = what;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      out += (i == 0 ? ": " : ", ");
      out += ids[i];
    }
    return out;
  }

  std::vector<std::string> offenders_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class AssignmentError : public Error {
 public:
  using Error::Error;
};

/// Search was asked to run on a log without full reference-type coverage.
class SearchPreconditionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A lookup (type, object, position) that does not resolve.
class QueryError : public Error {
 public:
  using Error::Error;
};

}  // namespace dynrel
