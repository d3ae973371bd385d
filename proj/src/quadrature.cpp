#include "darom/quadrature.hpp"

#include <cmath>
#include <vector>

#include "darom/errors.hpp"

namespace darom {

namespace {

struct GridSums {
  double z_full = 0.0;
  double z_reduced = 0.0;
  double bhattacharyya = 0.0;  // integral of sqrt(f * f_m)
  Vector mean_full, mean_reduced;
  Matrix second_full, second_reduced;
};

// Composite Simpson weights: 1, 4, 2, 4, ..., 4, 1 (points odd).
double simpson_weight(int i, int n_points) {
  if (i == 0 || i == n_points - 1) return 1.0;
  return (i % 2 == 1) ? 4.0 : 2.0;
}

GridSums integrate(const LogDensity& log_full, const LogDensity& log_reduced,
                   int dim, const Vector& lower, const Vector& upper,
                   int points) {
  GridSums sums;
  sums.mean_full = Vector::Zero(dim);
  sums.mean_reduced = Vector::Zero(dim);
  sums.second_full = Matrix::Zero(dim, dim);
  sums.second_reduced = Matrix::Zero(dim, dim);

  std::vector<double> step(dim), cell(dim);
  for (int d = 0; d < dim; ++d) {
    step[d] = (upper[d] - lower[d]) / (points - 1);
    cell[d] = step[d] / 3.0;
  }

  Vector x(dim);
  const long total = dim == 1 ? points : static_cast<long>(points) * points;
  for (long idx = 0; idx < total; ++idx) {
    const int i = static_cast<int>(idx % points);
    const int j = static_cast<int>(idx / points);
    double w = simpson_weight(i, points) * cell[0];
    x[0] = lower[0] + i * step[0];
    if (dim == 2) {
      w *= simpson_weight(j, points) * cell[1];
      x[1] = lower[1] + j * step[1];
    }
    const double f = std::exp(log_full(x));
    const double g = std::exp(log_reduced(x));
    sums.z_full += w * f;
    sums.z_reduced += w * g;
    sums.bhattacharyya += w * std::sqrt(f * g);
    sums.mean_full += w * f * x;
    sums.mean_reduced += w * g * x;
    sums.second_full += w * f * x * x.transpose();
    sums.second_reduced += w * g * x * x.transpose();
  }
  return sums;
}

double hellinger_from(const GridSums& s) {
  // d^2 = 1 - B / sqrt(Z Z_m) for normalized densities.
  const double bc = s.bhattacharyya / std::sqrt(s.z_full * s.z_reduced);
  return std::sqrt(std::max(0.0, 1.0 - std::min(1.0, bc)));
}

}  // namespace

ToyOracleResult toy_quadrature_oracle(const LogDensity& log_full,
                                      const LogDensity& log_reduced, int dim,
                                      const Vector& lower, const Vector& upper,
                                      int points_per_axis, double refine_rtol) {
  if (dim < 1 || dim > 2) {
    throw DomainError("quadrature oracle: only 1 or 2 dimensions supported");
  }
  if (lower.size() != dim || upper.size() != dim) {
    throw DomainError("quadrature oracle: bounds dimension mismatch");
  }
  if (points_per_axis < 201) {
    throw DomainError("quadrature oracle: need at least 201 points per axis");
  }
  if (points_per_axis % 2 == 0) ++points_per_axis;

  const int coarse_points = points_per_axis / 2 + 1;
  const GridSums fine =
      integrate(log_full, log_reduced, dim, lower, upper, points_per_axis);
  const GridSums coarse = integrate(log_full, log_reduced, dim, lower, upper,
                                    coarse_points % 2 == 0 ? coarse_points + 1
                                                           : coarse_points);

  if (fine.z_full <= 0.0 || fine.z_reduced <= 0.0) {
    throw NumericalError("quadrature oracle: vanishing normalizing constant");
  }

  const double d_fine = hellinger_from(fine);
  const double d_coarse = hellinger_from(coarse);
  const auto rel = [](double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
  };
  if (rel(fine.z_full, coarse.z_full) > refine_rtol ||
      rel(fine.z_reduced, coarse.z_reduced) > refine_rtol ||
      (std::max(d_fine, d_coarse) > 1e-9 && rel(d_fine, d_coarse) > refine_rtol)) {
    throw NumericalError(
        "quadrature oracle: grid refinement did not converge; enlarge the box "
        "or the point count");
  }

  ToyOracleResult out;
  out.points_per_axis = points_per_axis;
  out.lower = lower;
  out.upper = upper;
  out.z_full = fine.z_full;
  out.z_reduced = fine.z_reduced;
  out.hellinger = d_fine;
  out.mean_full = fine.mean_full / fine.z_full;
  out.mean_reduced = fine.mean_reduced / fine.z_reduced;
  out.cov_full = fine.second_full / fine.z_full -
                 out.mean_full * out.mean_full.transpose();
  out.cov_reduced = fine.second_reduced / fine.z_reduced -
                    out.mean_reduced * out.mean_reduced.transpose();
  return out;
}

double hellinger_gaussian_1d(double mean1, double std1, double mean2,
                             double std2) {
  const double s_sq = std1 * std1 + std2 * std2;
  const double bc = std::sqrt(2.0 * std1 * std2 / s_sq) *
                    std::exp(-(mean1 - mean2) * (mean1 - mean2) / (4.0 * s_sq));
  return std::sqrt(std::max(0.0, 1.0 - bc));
}

}  // namespace darom
