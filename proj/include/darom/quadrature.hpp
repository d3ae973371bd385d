#pragma once

#include <functional>

#include "darom/mesh.hpp"

namespace darom {

/// Tensor-grid quadrature oracle over a small (dim <= 2) unnormalized
/// density pair: normalizing constants, Hellinger distance and moments.
/// Only meaningful at toy scale; validates bias and approximation-error
/// behavior independently of any sampler.
struct ToyOracleResult {
  int points_per_axis = 0;
  Vector lower, upper;      // integration box
  double z_full = 0.0;      // normalizing constant of the full density
  double z_reduced = 0.0;
  double hellinger = 0.0;   // d_Hell(full, reduced) in [0, 1]
  Vector mean_full;         // posterior mean under the full density
  Matrix cov_full;
  Vector mean_reduced;
  Matrix cov_reduced;
};

using LogDensity = std::function<double(const Vector&)>;

/// Composite-Simpson tensor quadrature with a one-step refinement check:
/// the result must agree with the half-resolution grid to `refine_rtol`
/// relative on (Z, Z_m, Hellinger), else a NumericalError is raised.
///
/// points_per_axis must be odd and >= 201.
ToyOracleResult toy_quadrature_oracle(const LogDensity& log_full,
                                      const LogDensity& log_reduced, int dim,
                                      const Vector& lower, const Vector& upper,
                                      int points_per_axis = 401,
                                      double refine_rtol = 1e-6);

/// Closed-form Hellinger distance between two univariate normals (test
/// oracle): d^2 = 1 - sqrt(2 s1 s2 / (s1^2 + s2^2)) exp(-(m1-m2)^2/(4(s1^2+s2^2))).
double hellinger_gaussian_1d(double mean1, double std1, double mean2, double std2);

}  // namespace darom
