#pragma once

#include <filesystem>
#include <optional>
#include <random>

#include "darom/adaptation.hpp"
#include "darom/chain.hpp"
#include "darom/posterior.hpp"
#include "darom/proposal.hpp"

namespace darom {

/// One Metropolis step on the approximate posterior (the subchain kernel).
struct MhStep {
  Vector state;
  PosteriorEvaluation eval;
  bool accepted = false;
  double alpha = 0.0;
  double candidate_wall_seconds = 0.0;  // cost of the candidate evaluation
};

MhStep metropolis_reduced_step(const Vector& x, const PosteriorEvaluation& x_eval,
                               Posterior& posterior,
                               const GaussianProposal& proposal,
                               std::mt19937_64& rng);

/// Drives one chain of the chosen algorithm, owning the current-state
/// caches, the adaptation state and the random generator.
///
/// Random-number consumption order per step is fixed: proposal draws first
/// (dim normals each), then at most one uniform per acceptance decision.
/// The uniform is drawn only when the log-ratio is finite and negative;
/// ratios >= 1 accept and -inf/NaN ratios reject without consuming from the
/// generator, so runs are bit-reproducible given (config, seed).
class ChainRunner {
 public:
  ChainRunner(Posterior& posterior, GaussianProposal proposal,
              AdaptationConfig adaptation, Algorithm algorithm,
              std::uint64_t seed);

  /// Fresh start; performs the initial full evaluation and, on adaptive
  /// algorithms with an empty basis, seeds the basis with that snapshot.
  void initialize(const Vector& x0);

  /// Continues a previously recorded chain (rng_state as produced by
  /// rng_state()); evaluation caches are rebuilt lazily.
  void restore(ChainRecord record, const std::string& rng_state,
               const AdaptationState& adaptation_state);

  StepRecord step();
  void run(std::size_t n_steps);

  const ChainRecord& record() const { return record_; }
  ChainRecord take_record();
  const Vector& current() const { return x_; }
  const AdaptationState& adaptation_state() const { return record_.adaptation; }
  std::string rng_state() const;
  Posterior& posterior() { return *posterior_; }

  /// Streams accepted steps to an append-only binary log.
  void attach_log(const std::filesystem::path& path, bool resume);

 private:
  StepRecord step_reference();
  StepRecord step_full_target();
  StepRecord step_eps_approximate();

  void ensure_full_current();
  void ensure_reduced_current();
  PosteriorEvaluation eval_full_counted(const Vector& x);
  PosteriorEvaluation eval_reduced_counted(const Vector& x);
  bool accept(double log_ratio);
  void update_adaptation_latch();
  void finish_step(StepRecord step);

  Posterior* posterior_;
  GaussianProposal proposal_;
  AdaptationConfig adaptation_;
  Algorithm algorithm_;
  std::mt19937_64 rng_;

  Vector x_;
  std::optional<PosteriorEvaluation> full_;
  std::optional<PosteriorEvaluation> reduced_;

  ChainRecord record_;
  ChainLogWriter log_;

  // Per-step accumulation (reset by the eval helpers).
  std::uint16_t step_full_evals_ = 0;
  std::uint16_t step_reduced_evals_ = 0;
  double step_eval_seconds_ = 0.0;
};

/// Runs a complete chain. If checkpoint_dir is set, any failure writes the
/// chain log, adaptation/rng state and basis there before rethrowing, so the
/// run can be resumed.
ChainRecord run_chain(Posterior& posterior, const GaussianProposal& proposal,
                      const AdaptationConfig& adaptation, Algorithm algorithm,
                      const Vector& x0, std::size_t n_steps, std::uint64_t seed,
                      const std::optional<std::filesystem::path>& checkpoint_dir =
                          std::nullopt);

}  // namespace darom
