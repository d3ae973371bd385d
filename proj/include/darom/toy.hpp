#pragma once

#include "darom/posterior.hpp"

namespace darom {

/// Analytic linear-Gaussian test posterior (no PDE).
///
/// Full model F(x) = G x with N(0, I) prior and isotropic noise; the
/// posterior is Gaussian with closed-form moments. The approximate model
/// adds a bounded output perturbation
///   F_m(x) = F(x) + amp * sigma * s(x),  s_j(x) = sin(freq * (w . x) + j),
/// so the scaled model error is bounded by `amp` everywhere and the
/// indicator equals the true scaled error. amp = 0 reproduces the full
/// model through the identical code path.
struct ToySpec {
  Matrix forward;      // G, N_d x N_p
  double noise_sigma = 0.5;
  Vector data;         // d_obs
  double approx_amp = 0.0;
  double approx_freq = 3.0;

  /// The standard two-parameter instance used across the tests.
  static ToySpec standard_2d(double approx_amp = 0.0);
};

class ToyPosterior : public Posterior {
 public:
  explicit ToyPosterior(ToySpec spec, double log_density_shift = 0.0);

  int dim() const override { return static_cast<int>(spec_.forward.cols()); }
  PosteriorEvaluation evaluate_full(const Vector& x) override;
  PosteriorEvaluation evaluate_reduced(const Vector& x) override;
  double true_error_inf(const PosteriorEvaluation& full,
                        const PosteriorEvaluation& reduced) const override;

  /// Unnormalized log densities (for the quadrature oracle).
  double log_full_density(const Vector& x) const;
  double log_reduced_density(const Vector& x) const;

  /// Closed-form Gaussian posterior moments of the full model.
  Vector posterior_mean() const;
  Matrix posterior_cov() const;

  const ToySpec& spec() const { return spec_; }

 private:
  Vector approx_outputs(const Vector& x) const;
  ToySpec spec_;
  double shift_;  // additive log-density constant (invariance tests)
  Vector mix_;    // direction w of the perturbation phase
};

}  // namespace darom
