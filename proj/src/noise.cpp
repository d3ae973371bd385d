#include "darom/noise.hpp"

#include "darom/errors.hpp"

namespace darom {

NoiseModel::NoiseModel(Vector std_devs) : std_devs_(std::move(std_devs)) {
  if (std_devs_.size() == 0 || std_devs_.minCoeff() <= 0.0) {
    throw DomainError("noise model: standard deviations must be positive");
  }
}

NoiseModel NoiseModel::isotropic(int dim, double sigma) {
  return NoiseModel(Vector::Constant(dim, sigma));
}

Vector NoiseModel::whiten(const Vector& v) const {
  if (v.size() != std_devs_.size()) throw DomainError("noise model: dimension mismatch");
  return v.cwiseQuotient(std_devs_);
}

Vector NoiseModel::unwhiten(const Vector& v) const {
  if (v.size() != std_devs_.size()) throw DomainError("noise model: dimension mismatch");
  return v.cwiseProduct(std_devs_);
}

double NoiseModel::misfit(const Vector& outputs, const Vector& observations) const {
  if (outputs.size() != observations.size()) {
    throw DomainError("misfit: output dimension mismatch");
  }
  return 0.5 * whiten(outputs - observations).squaredNorm();
}

double misfit(const Vector& outputs, const Vector& observations,
              const NoiseModel& noise) {
  return noise.misfit(outputs, observations);
}

}  // namespace darom
