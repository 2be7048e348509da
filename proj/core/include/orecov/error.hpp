#pragma once

#include <stdexcept>
#include <string>

namespace orecov {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A requested object (frequency set, grid, truncation) exceeds a configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver failure or a system too ill-conditioned to solve.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// File or stream failure; the message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace orecov
