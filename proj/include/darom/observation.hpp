#pragma once

#include <Eigen/Sparse>

#include "darom/mesh.hpp"

namespace darom {

/// Maps the nodal state to pointwise sensor readings by bilinear
/// interpolation. Each row holds the nonnegative element shape-function
/// values at the sensor location; rows sum to one.
struct ObservationOperator {
  Eigen::Matrix<double, Eigen::Dynamic, 2> sensor_coords;
  Eigen::SparseMatrix<double> weights;  // N_d x n

  int output_dim() const { return static_cast<int>(weights.rows()); }
  Vector observe(const Vector& state) const;

  /// Sensors on the interior grid {spacing, 2*spacing, ...}^2 strictly
  /// inside the domain; the default is the 9x9 grid with spacing 0.1.
  static ObservationOperator interior_grid(const Mesh& mesh, double spacing = 0.1);
  static ObservationOperator at_points(
      const Mesh& mesh, const Eigen::Matrix<double, Eigen::Dynamic, 2>& coords);
};

}  // namespace darom
