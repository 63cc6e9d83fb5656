#pragma once

#include <stdexcept>
#include <string>

namespace rigidloc {

/// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong dimensions, non-finite entries, out-of-range parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The measurement geometry does not pin down the requested unknowns.
class IdentifiabilityError : public Error {
 public:
  using Error::Error;
};

/// A measured range that the whitener cannot use (non-positive).
class MeasurementError : public Error {
 public:
  using Error::Error;
};

}  // namespace rigidloc
