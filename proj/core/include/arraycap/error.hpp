#pragma once

#include <stdexcept>
#include <string>

namespace arraycap {

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

/// A lookup fell outside a tabulated grid; no extrapolation is attempted.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. The message names the offending line when there is one.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A covariance that should be positive semidefinite is not.
class DegenerateCovariance : public Error {
 public:
  using Error::Error;
};

/// A covariance is rank deficient and cannot be whitened.
class SingularCovariance : public Error {
 public:
  SingularCovariance(const std::string& what, double eigenvalue_ratio)
      : Error(what), eigenvalue_ratio_(eigenvalue_ratio) {}

  /// min(s) / max(s) of the offending covariance.
  double eigenvalue_ratio() const noexcept { return eigenvalue_ratio_; }

 private:
  double eigenvalue_ratio_;
};

}  // namespace arraycap
