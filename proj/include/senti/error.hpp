#pragma once

#include <stdexcept>
#include <string>

namespace senti {

// Base for every error the library raises. The CLI maps the subclasses to
// exit codes: InputError -> 2, ExternalError -> 3, anything else -> 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad files, bad config values, malformed rows, dimension mismatches on load.
class InputError : public Error {
 public:
  using Error::Error;
};

// Failures of a remote service (comments API).
class ExternalError : public Error {
 public:
  using Error::Error;
};

// Numerical failure inside training or gradient computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace senti
