#pragma once

#include <Eigen/Dense>
#include <random>

#include "darom/mesh.hpp"

namespace darom {

/// Prior over the parameter vector.
///
/// IndependentLogNormal: each weight x_i = exp(sigma0 * z_i) with z_i
/// standard normal; log-density (up to a constant, fixed at zero)
///   sum_i [ -log(x_i)^2 / (2 sigma0^2) - log(x_i) ],
/// and -inf whenever any x_i <= 0.
///
/// StandardGaussianKl: whitened Karhunen-Loeve weights, x ~ N(0, I);
/// log-density -|x|^2/2 up to the same zero constant.
class PriorModel {
 public:
  enum class Kind { IndependentLogNormal, StandardGaussianKl };

  static PriorModel independent_log_normal(int dim, double sigma0);
  static PriorModel standard_gaussian_kl(int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double sigma0() const { return sigma0_; }

  double log_density(const Vector& x) const;
  Vector sample(std::mt19937_64& rng) const;

  /// Analytic standard deviation of the i-th prior marginal (used by the
  /// posterior tightness diagnostic).
  double marginal_std(int i) const;

 private:
  Kind kind_ = Kind::StandardGaussianKl;
  int dim_ = 0;
  double sigma0_ = 1.0;
};

/// Free-function form of the prior log-density.
double log_prior(const PriorModel& prior, const Vector& x);

}  // namespace darom
