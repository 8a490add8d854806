#pragma once

#include <stdexcept>
#include <string>

namespace inkmetrics {

// Base for every error raised by the library. The CLI exits with status 1 for
// parse, validation, configuration and domain errors and for catalog errors
// other than I/O; everything else exits with 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document (JSON syntax, missing fields, wrong types).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a data invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Out-of-range configuration, e.g. unsupported basis degree.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A trace or symbol that collapses to a point.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class CatalogError : public Error {
 public:
  enum class Code { kIo, kFormat, kVersion, kBasis, kDuplicateClass, kUnknownClass };

  CatalogError(Code code, const std::string& what) : Error(what), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

}  // namespace inkmetrics
