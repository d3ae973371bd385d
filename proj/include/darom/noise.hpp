#pragma once

#include <Eigen/Dense>

#include "darom/mesh.hpp"

namespace darom {

/// Diagonal Gaussian observation-noise model with per-sensor standard
/// deviations; whitening divides by them.
class NoiseModel {
 public:
  explicit NoiseModel(Vector std_devs);
  static NoiseModel isotropic(int dim, double sigma);

  int dim() const { return static_cast<int>(std_devs_.size()); }
  const Vector& std_devs() const { return std_devs_; }

  Vector whiten(const Vector& v) const;
  Vector unwhiten(const Vector& v) const;

  /// Data misfit 0.5 * |whiten(outputs - observations)|^2.
  double misfit(const Vector& outputs, const Vector& observations) const;

 private:
  Vector std_devs_;
};

double misfit(const Vector& outputs, const Vector& observations,
              const NoiseModel& noise);

}  // namespace darom
