#pragma once

#include <stdexcept>
#include <string>

namespace mrfcp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data is malformed or inconsistent (bad CSV cell, unknown symbol, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine produced a non-finite value or could not proceed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mrfcp
