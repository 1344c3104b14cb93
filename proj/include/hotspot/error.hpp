#pragma once

#include <stdexcept>
#include <string>

namespace hotspot {

// Base of every error raised by the toolkit. The subclass decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameter values or malformed configuration (exit code 2).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Unreadable, missing or unusable input data (exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

// Input is well formed but violates an algorithm precondition (exit code 4).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace hotspot
