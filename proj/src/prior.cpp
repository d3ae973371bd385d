#include "darom/prior.hpp"

#include <cmath>
#include <limits>

#include "darom/errors.hpp"

namespace darom {

PriorModel PriorModel::independent_log_normal(int dim, double sigma0) {
  if (sigma0 <= 0.0) throw DomainError("prior: sigma0 must be positive");
  if (dim < 1) throw DomainError("prior: dimension must be positive");
  PriorModel p;
  p.kind_ = Kind::IndependentLogNormal;
  p.dim_ = dim;
  p.sigma0_ = sigma0;
  return p;
}

PriorModel PriorModel::standard_gaussian_kl(int dim) {
  if (dim < 1) throw DomainError("prior: dimension must be positive");
  PriorModel p;
  p.kind_ = Kind::StandardGaussianKl;
  p.dim_ = dim;
  p.sigma0_ = 1.0;
  return p;
}

double PriorModel::log_density(const Vector& x) const {
  if (x.size() != dim_) throw DomainError("prior: dimension mismatch");
  if (kind_ == Kind::StandardGaussianKl) {
    return -0.5 * x.squaredNorm();
  }
  if (x.minCoeff() <= 0.0) return -std::numeric_limits<double>::infinity();
  const double inv2s2 = 1.0 / (2.0 * sigma0_ * sigma0_);
  double value = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const double lx = std::log(x[i]);
    value += -lx * lx * inv2s2 - lx;
  }
  return value;
}

Vector PriorModel::sample(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(dim_);
  for (int i = 0; i < dim_; ++i) x[i] = normal(rng);
  if (kind_ == Kind::IndependentLogNormal) {
    x = (sigma0_ * x).array().exp().matrix();
  }
  return x;
}

double PriorModel::marginal_std(int i) const {
  if (i < 0 || i >= dim_) throw DomainError("prior: marginal index out of range");
  if (kind_ == Kind::StandardGaussianKl) return 1.0;
  const double s2 = sigma0_ * sigma0_;
  return std::sqrt((std::exp(s2) - 1.0) * std::exp(s2));
}

double log_prior(const PriorModel& prior, const Vector& x) {
  return prior.log_density(x);
}

}  // namespace darom
