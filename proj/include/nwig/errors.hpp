#pragma once

#include <stdexcept>
#include <string>

namespace nwig {

// An input value violates a documented precondition (non-positive spread,
// invalid wavenumber, out-of-range quadrature order, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A run-configuration document is malformed, has unknown keys, or combines
// options inconsistently.  Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A state's amplitude (or a density kernel) is not negligible at a grid or
// integration-window boundary, so a truncated quadrature would be unreliable.
// Carries the offending boundary name and the measured magnitude relative to
// the peak.  Maps to CLI exit code 3.
class SupportEscapeError : public std::runtime_error {
 public:
  SupportEscapeError(const std::string& boundary, double magnitude, double peak)
      : std::runtime_error("support escapes the " + boundary +
                           " boundary: |value| = " + std::to_string(magnitude) +
                           " vs peak " + std::to_string(peak)),
        boundary_(boundary),
        magnitude_(magnitude),
        peak_(peak) {}

  const std::string& boundary() const { return boundary_; }
  double magnitude() const { return magnitude_; }
  double peak() const { return peak_; }

 private:
  std::string boundary_;
  double magnitude_;
  double peak_;
};

// A computed quantity violates a bound that holds analytically (for example a
// purity ratio outside [0, 1] beyond quadrature tolerance).  Indicates an
// inadequate grid rather than bad input.  Maps to CLI exit code 3.
class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nwig
