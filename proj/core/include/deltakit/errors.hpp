#pragma once

#include <stdexcept>
#include <string>

namespace deltakit {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid numeric or semantic input (non-positive length, angle out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A requested pose lies outside the reachable workspace.
class ReachabilityError : public Error {
 public:
  explicit ReachabilityError(const std::string& msg, int leg = -1)
      : Error(msg), leg_(leg) {}
  /// Offending leg index (0-based), or -1 when not leg-specific.
  int leg() const { return leg_; }

 private:
  int leg_;
};

/// A linear system was singular or ill-conditioned beyond the configured limit.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& msg, double condition = 0.0)
      : Error(msg), condition_(condition) {}
  /// Estimated condition number at the failure, 0 when unavailable.
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// Curve fitting failed (insufficient or degenerate data).
class FitError : public Error {
 public:
  using Error::Error;
};

/// Run-configuration parsing or validation failed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An input data file is missing or malformed.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace deltakit
