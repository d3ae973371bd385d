#pragma once

#include <stdexcept>
#include <string>

namespace darom {

/// Invalid input in a physical/mathematical sense (nonpositive permeability,
/// dimension mismatch, inadmissible configuration).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A linear solver or decomposition failed or left an unacceptable residual.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual = -1.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Configuration file / experiment setup problems; message carries the field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// The eps-approximate sampler reached the basis capacity M before the
/// finite adaptation criterion fired; the caller should switch to the
/// full target algorithm.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace darom
