#pragma once

#include <Eigen/Dense>

#include "darom/mesh.hpp"

namespace darom {

/// Parameter-to-permeability map, bound to a mesh at construction.
///
/// Rbf: k(r) = sum_i b(r; r_i) x_i with Gaussian bumps b of a fixed width;
/// the parameters are the bump weights.
///
/// GaussianProcessKl: k(r) = exp(x(r)) with the latent log-field expanded in
/// the leading Karhunen-Loeve modes of a squared-exponential Gaussian
/// process; the parameters are the whitened mode weights.
class PermeabilityMap {
 public:
  enum class Kind { Rbf, GaussianProcessKl };

  static PermeabilityMap rbf(const Mesh& mesh,
                             const Eigen::Matrix<double, Eigen::Dynamic, 2>& centers,
                             double width);

  /// The nine-bump layout: centers on the 3x3 grid {0.2, 0.5, 0.8}^2,
  /// width 0.15.
  static PermeabilityMap rbf_default(const Mesh& mesh);

  /// Karhunen-Loeve expansion of the squared-exponential covariance
  /// C(r, r') = exp(-|r - r'|^2 / (2 s^2)) built on the mesh nodes.
  ///
  /// The covariance factorizes over the two axes on a tensor grid, so the
  /// eigendecomposition is computed exactly from the two one-dimensional
  /// problems. Modes are retained in decreasing eigenvalue order until their
  /// eigenvalue sum reaches `energy` times the total; eigenvalues are clamped
  /// at 1e-12 of the maximum.
  static PermeabilityMap kl_expansion(const Mesh& mesh, double length_scale,
                                      double energy);

  Kind kind() const { return kind_; }
  int parameter_dim() const { return static_cast<int>(basis_.cols()); }

  /// Nodal permeability; throws DomainError if any value is nonpositive
  /// (possible for Rbf with nonpositive weights, impossible for the
  /// exponential GP form).
  Vector nodal_field(const Vector& x) const;

  /// Latent nodal log-field (GP-KL) or the linear bump field (Rbf) before
  /// any exponentiation.
  Vector latent_field(const Vector& x) const;

  // GP-KL accessors (empty for Rbf).
  const Vector& kl_eigenvalues() const { return kl_eigenvalues_; }
  /// Unscaled orthonormal modes, one column per retained eigenvalue.
  const Matrix& kl_modes() const { return kl_modes_; }
  double kl_total_energy() const { return kl_total_energy_; }
  double length_scale() const { return length_scale_; }
  double rbf_width() const { return width_; }
  const Eigen::Matrix<double, Eigen::Dynamic, 2>& rbf_centers() const {
    return centers_;
  }
  int mesh_node_count() const { return static_cast<int>(basis_.rows()); }

 private:
  PermeabilityMap() = default;

  Kind kind_ = Kind::Rbf;
  // Rbf: bump values per node; GP-KL: modes scaled by sqrt(eigenvalue).
  Matrix basis_;
  Eigen::Matrix<double, Eigen::Dynamic, 2> centers_;
  double width_ = 0.0;
  Vector kl_eigenvalues_;
  Matrix kl_modes_;
  double kl_total_energy_ = 0.0;
  double length_scale_ = 0.0;
};

/// Spec-level helper; checks that `mesh` matches the mesh the map was built
/// on before delegating to PermeabilityMap::nodal_field.
Vector permeability_field(const PermeabilityMap& map, const Vector& x,
                          const Mesh& mesh);

}  // namespace darom
