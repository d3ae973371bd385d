#include "darom/proposal.hpp"

#include <Eigen/Cholesky>

#include "darom/errors.hpp"

namespace darom {

GaussianProposal::GaussianProposal(ProposalConfig config)
    : config_(std::move(config)) {
  const int dim = static_cast<int>(config_.covariance.rows());
  if (dim < 1 || config_.covariance.cols() != dim) {
    throw DomainError("proposal: covariance must be square and nonempty");
  }
  if (config_.scale <= 0.0) config_.scale = ProposalConfig::default_scale(dim);
  Eigen::LLT<Matrix> llt(config_.covariance);
  if (llt.info() != Eigen::Success) {
    throw DomainError("proposal: covariance is not positive definite");
  }
  factor_ = llt.matrixU();
}

Vector GaussianProposal::propose(const Vector& x, std::mt19937_64& rng) const {
  if (x.size() != factor_.rows()) throw DomainError("proposal: dimension mismatch");
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(x.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
  return x + config_.scale * (factor_.transpose() * z);
}

Vector propose(const GaussianProposal& proposal, const Vector& x,
               std::mt19937_64& rng) {
  return proposal.propose(x, rng);
}

}  // namespace darom
