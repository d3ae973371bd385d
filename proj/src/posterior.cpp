#include "darom/posterior.hpp"

#include <chrono>
#include <cmath>

#include "darom/errors.hpp"

namespace darom {

PdePosterior::PdePosterior(const ForwardModel& model, const PriorModel& prior,
                           Dataset dataset, NoiseModel noise,
                           std::shared_ptr<ReducedBasis> basis)
    : model_(&model),
      prior_(&prior),
      dataset_(std::move(dataset)),
      noise_(std::move(noise)),
      basis_(std::move(basis)) {
  if (dataset_.observations.size() != model.output_dim()) {
    throw DomainError("posterior: dataset dimension does not match the model");
  }
  if (basis_) {
    rom_ = std::make_unique<RomEvaluator>(*model_, *basis_, noise_);
  }
}

PosteriorEvaluation PdePosterior::evaluate_full(const Vector& x) {
  PosteriorEvaluation eval;
  eval.kind = EvalKind::Full;
  eval.log_prior = prior_->log_density(x);
  if (!std::isfinite(eval.log_prior)) {
    eval.admissible = false;
    return eval;
  }
  const auto start = std::chrono::steady_clock::now();
  ForwardSolve solve = model_->solve(x);
  eval.outputs = std::move(solve.outputs);
  eval.state = std::move(solve.state);
  eval.misfit = noise_.misfit(eval.outputs, dataset_.observations);
  eval.log_posterior = eval.log_prior - eval.misfit;
  eval.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return eval;
}

PosteriorEvaluation PdePosterior::evaluate_reduced(const Vector& x) {
  if (!rom_) throw DomainError("posterior: no reduced basis attached");
  PosteriorEvaluation eval;
  eval.kind = EvalKind::Reduced;
  eval.log_prior = prior_->log_density(x);
  if (!std::isfinite(eval.log_prior)) {
    eval.admissible = false;
    return eval;
  }
  const auto start = std::chrono::steady_clock::now();
  RomSolveResult solve = rom_->solve(x);
  eval.outputs = solve.outputs;
  eval.misfit = noise_.misfit(eval.outputs, dataset_.observations);
  eval.log_posterior = eval.log_prior - eval.misfit;
  eval.indicator_inf = rom_->error_indicator(solve).inf_norm();
  eval.generation = solve.generation;
  eval.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return eval;
}

double PdePosterior::true_error_inf(const PosteriorEvaluation& full,
                                    const PosteriorEvaluation& reduced) const {
  if (!full.admissible || !reduced.admissible) {
    return std::numeric_limits<double>::infinity();
  }
  return noise_.whiten(full.outputs - reduced.outputs).cwiseAbs().maxCoeff();
}

ReducedBasis::EnrichOutcome PdePosterior::enrich_from(
    const PosteriorEvaluation& full_eval, SnapshotInfo info) {
  if (!basis_) return ReducedBasis::EnrichOutcome::AtCapacity;
  if (full_eval.kind != EvalKind::Full || full_eval.state.size() == 0) {
    throw DomainError("enrich_from: needs a full evaluation with state");
  }
  return basis_->enrich(full_eval.state, std::move(info));
}

PosteriorEvaluation log_posterior_full(PdePosterior& posterior, const Vector& x) {
  return posterior.evaluate_full(x);
}

PosteriorEvaluation log_posterior_reduced(PdePosterior& posterior, const Vector& x) {
  return posterior.evaluate_reduced(x);
}

}  // namespace darom
