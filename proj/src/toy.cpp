#include "darom/toy.hpp"

#include <cmath>

#include "darom/errors.hpp"

namespace darom {

ToySpec ToySpec::standard_2d(double approx_amp) {
  ToySpec spec;
  spec.forward.resize(3, 2);
  spec.forward << 1.0, 0.6, -0.4, 1.1, 0.3, 0.8;
  spec.noise_sigma = 0.5;
  spec.data.resize(3);
  spec.data << 0.9, 0.3, 0.5;
  spec.approx_amp = approx_amp;
  return spec;
}

ToyPosterior::ToyPosterior(ToySpec spec, double log_density_shift)
    : spec_(std::move(spec)), shift_(log_density_shift) {
  if (spec_.noise_sigma <= 0.0) throw DomainError("toy: noise sigma must be positive");
  if (spec_.data.size() != spec_.forward.rows()) {
    throw DomainError("toy: data dimension does not match the forward matrix");
  }
  mix_ = Vector::LinSpaced(spec_.forward.cols(), 1.0, 1.7);
}

Vector ToyPosterior::approx_outputs(const Vector& x) const {
  Vector d = spec_.forward * x;
  if (spec_.approx_amp != 0.0) {
    const double phase = spec_.approx_freq * mix_.dot(x);
    for (Eigen::Index j = 0; j < d.size(); ++j) {
      d[j] += spec_.approx_amp * spec_.noise_sigma *
              std::sin(phase + static_cast<double>(j));
    }
  }
  return d;
}

double ToyPosterior::log_full_density(const Vector& x) const {
  const Vector r = (spec_.forward * x - spec_.data) / spec_.noise_sigma;
  return -0.5 * x.squaredNorm() - 0.5 * r.squaredNorm() + shift_;
}

double ToyPosterior::log_reduced_density(const Vector& x) const {
  const Vector r = (approx_outputs(x) - spec_.data) / spec_.noise_sigma;
  return -0.5 * x.squaredNorm() - 0.5 * r.squaredNorm() + shift_;
}

PosteriorEvaluation ToyPosterior::evaluate_full(const Vector& x) {
  PosteriorEvaluation eval;
  eval.kind = EvalKind::Full;
  eval.log_prior = -0.5 * x.squaredNorm() + shift_;
  eval.outputs = spec_.forward * x;
  const Vector r = (eval.outputs - spec_.data) / spec_.noise_sigma;
  eval.misfit = 0.5 * r.squaredNorm();
  eval.log_posterior = eval.log_prior - eval.misfit;
  return eval;
}

PosteriorEvaluation ToyPosterior::evaluate_reduced(const Vector& x) {
  PosteriorEvaluation eval;
  eval.kind = EvalKind::Reduced;
  eval.log_prior = -0.5 * x.squaredNorm() + shift_;
  eval.outputs = approx_outputs(x);
  const Vector r = (eval.outputs - spec_.data) / spec_.noise_sigma;
  eval.misfit = 0.5 * r.squaredNorm();
  eval.log_posterior = eval.log_prior - eval.misfit;
  eval.indicator_inf =
      spec_.approx_amp == 0.0
          ? 0.0
          : ((eval.outputs - spec_.forward * x) / spec_.noise_sigma)
                .cwiseAbs()
                .maxCoeff();
  return eval;
}

double ToyPosterior::true_error_inf(const PosteriorEvaluation& full,
                                    const PosteriorEvaluation& reduced) const {
  return ((full.outputs - reduced.outputs) / spec_.noise_sigma)
      .cwiseAbs()
      .maxCoeff();
}

Vector ToyPosterior::posterior_mean() const {
  return posterior_cov() * (spec_.forward.transpose() * spec_.data) /
         (spec_.noise_sigma * spec_.noise_sigma);
}

Matrix ToyPosterior::posterior_cov() const {
  const int np = dim();
  const Matrix precision =
      Matrix::Identity(np, np) +
      spec_.forward.transpose() * spec_.forward /
          (spec_.noise_sigma * spec_.noise_sigma);
  return precision.inverse();
}

}  // namespace darom
