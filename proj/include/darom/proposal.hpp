#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>

#include "darom/mesh.hpp"

namespace darom {

/// Symmetric Gaussian random-walk proposal. The covariance is typically a
/// pilot-run estimate; the scale multiplier defaults to 2.38/sqrt(N_p).
struct ProposalConfig {
  Matrix covariance;
  double scale = 0.0;  // <= 0 picks the default
  std::string provenance;  // where the covariance came from

  static double default_scale(int dim) { return 2.38 / std::sqrt(static_cast<double>(dim)); }
};

class GaussianProposal {
 public:
  explicit GaussianProposal(ProposalConfig config);

  /// x' = x + scale * U^T z with U the upper Cholesky factor of the
  /// covariance and z standard normal; symmetric, so proposal ratios cancel.
  Vector propose(const Vector& x, std::mt19937_64& rng) const;

  const ProposalConfig& config() const { return config_; }
  int dim() const { return static_cast<int>(factor_.rows()); }

 private:
  ProposalConfig config_;
  Matrix factor_;  // upper Cholesky factor U, covariance = U^T U
};

Vector propose(const GaussianProposal& proposal, const Vector& x,
               std::mt19937_64& rng);

}  // namespace darom
