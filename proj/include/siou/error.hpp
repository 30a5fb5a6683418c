#ifndef SIOU_ERROR_HPP_
#define SIOU_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace siou {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Negative coordinates, dimension mismatches, malformed increments.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Inclusion-exclusion expansion over too many corners.
class ComplexityError : public Error {
 public:
  using Error::Error;
};

/// A computed quantity violates an identity the construction guarantees.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Kernel parameters or transition variances out of their valid range.
class KernelError : public Error {
 public:
  using Error::Error;
};

/// Factorization failed at the largest jitter.
class NotPsdError : public Error {
 public:
  NotPsdError(const std::string& what, double pivot) : Error(what), pivot_(pivot) {}
  double pivot() const noexcept { return pivot_; }

 private:
  double pivot_;
};

class PlanningError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration (bad run config, violated check preconditions).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace siou

#endif  // SIOU_ERROR_HPP_
