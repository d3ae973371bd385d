#pragma once

#include <cstdint>
#include <limits>
#include <memory>

#include "darom/dataset.hpp"
#include "darom/forward_model.hpp"
#include "darom/noise.hpp"
#include "darom/prior.hpp"
#include "darom/rom.hpp"

namespace darom {

enum class EvalKind { Full, Reduced };

/// One unnormalized log-posterior evaluation. Densities are handled in log
/// space throughout; normalizing constants never enter sampling decisions.
struct PosteriorEvaluation {
  double log_posterior = -std::numeric_limits<double>::infinity();
  double misfit = std::numeric_limits<double>::infinity();
  double log_prior = -std::numeric_limits<double>::infinity();
  Vector outputs;  // model outputs (empty when inadmissible)
  Vector state;    // full state for snapshot reuse (full PDE evaluations only)
  EvalKind kind = EvalKind::Full;
  bool admissible = true;
  double indicator_inf = std::numeric_limits<double>::quiet_NaN();  // reduced
  std::uint64_t generation = 0;                                    // reduced
  double wall_seconds = 0.0;
};

/// The full/approximate posterior pair the samplers operate on. All
/// densities are unnormalized; acceptance decisions use log-ratios only.
class Posterior {
 public:
  virtual ~Posterior() = default;

  virtual int dim() const = 0;
  virtual PosteriorEvaluation evaluate_full(const Vector& x) = 0;
  virtual PosteriorEvaluation evaluate_reduced(const Vector& x) = 0;

  /// |whiten(full outputs - reduced outputs)|_inf at a common parameter.
  virtual double true_error_inf(const PosteriorEvaluation& full,
                                const PosteriorEvaluation& reduced) const = 0;

  /// Whether the approximation can be refined online.
  virtual bool adaptable() const { return false; }
  virtual int basis_dim() const { return 0; }
  virtual std::uint64_t approximation_generation() const { return 0; }
  virtual bool basis_at_capacity() const { return true; }
  virtual ReducedBasis::EnrichOutcome enrich_from(
      const PosteriorEvaluation& full_eval, SnapshotInfo info) {
    (void)full_eval;
    (void)info;
    return ReducedBasis::EnrichOutcome::AtCapacity;
  }
};

/// PDE posterior: composes the forward solve (full or reduced), the data
/// misfit and the prior. Inadmissible parameters short-circuit to -inf
/// without touching the solver.
class PdePosterior : public Posterior {
 public:
  PdePosterior(const ForwardModel& model, const PriorModel& prior,
               Dataset dataset, NoiseModel noise,
               std::shared_ptr<ReducedBasis> basis);

  int dim() const override { return prior_->dim(); }
  PosteriorEvaluation evaluate_full(const Vector& x) override;
  PosteriorEvaluation evaluate_reduced(const Vector& x) override;
  double true_error_inf(const PosteriorEvaluation& full,
                        const PosteriorEvaluation& reduced) const override;

  bool adaptable() const override { return basis_ != nullptr; }
  int basis_dim() const override { return basis_ ? basis_->dim() : 0; }
  std::uint64_t approximation_generation() const override {
    return basis_ ? basis_->generation() : 0;
  }
  bool basis_at_capacity() const override {
    return basis_ ? basis_->at_capacity() : true;
  }
  ReducedBasis::EnrichOutcome enrich_from(const PosteriorEvaluation& full_eval,
                                          SnapshotInfo info) override;

  const ForwardModel& model() const { return *model_; }
  const PriorModel& prior() const { return *prior_; }
  const Dataset& dataset() const { return dataset_; }
  const NoiseModel& noise() const { return noise_; }
  std::shared_ptr<ReducedBasis> basis() { return basis_; }
  RomEvaluator* rom() { return rom_ ? rom_.get() : nullptr; }

 private:
  const ForwardModel* model_;
  const PriorModel* prior_;
  Dataset dataset_;
  NoiseModel noise_;
  std::shared_ptr<ReducedBasis> basis_;
  std::unique_ptr<RomEvaluator> rom_;
};

/// Spec-level convenience wrappers.
PosteriorEvaluation log_posterior_full(PdePosterior& posterior, const Vector& x);
PosteriorEvaluation log_posterior_reduced(PdePosterior& posterior, const Vector& x);

}  // namespace darom
