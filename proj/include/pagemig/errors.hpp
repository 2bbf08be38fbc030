#pragma once

#include <stdexcept>
#include <string>

namespace pagemig {

// Base for every error the library raises. Callers that do not care about
// the category catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point, label or metric kind that is not valid where it is used.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Mismatched lengths or non-square matrices.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// An index interval outside 1..n.
class BoundsError : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused because the instance is too large.
class SizeError : public Error {
 public:
  using Error::Error;
};

// A strategy was stepped out of order or reused after a run.
class StateError : public Error {
 public:
  using Error::Error;
};

// Parameters that round to a degenerate instance.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment configuration; the message names the field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A results table that cannot be turned into a ratio report.
class ReportError : public Error {
 public:
  using Error::Error;
};

}  // namespace pagemig
