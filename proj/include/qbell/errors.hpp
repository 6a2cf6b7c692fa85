#pragma once

#include <stdexcept>
#include <string>

namespace qbell {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on dimensions or indices is violated (d < 2, odd d where
/// an even dimension is required, index out of range, length mismatch).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The requested dimension exceeds the configured memory cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An input object fails one of its invariants. `invariant()` names it.
class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, const std::string& what)
      : Error(what), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// A state could not be certified for perfect correlations of the
/// requested sign, or a witness search failed.
class CertificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbell
