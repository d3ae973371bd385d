#include "darom/sampler.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "darom/errors.hpp"

namespace darom {

namespace {

double clamped_prob(double log_ratio) {
  if (std::isnan(log_ratio)) return 0.0;
  return std::exp(std::min(0.0, log_ratio));
}

}  // namespace

MhStep metropolis_reduced_step(const Vector& x, const PosteriorEvaluation& x_eval,
                               Posterior& posterior,
                               const GaussianProposal& proposal,
                               std::mt19937_64& rng) {
  MhStep out;
  const Vector candidate = proposal.propose(x, rng);
  PosteriorEvaluation cand_eval = posterior.evaluate_reduced(candidate);
  out.candidate_wall_seconds = cand_eval.wall_seconds;
  const double log_ratio = cand_eval.log_posterior - x_eval.log_posterior;
  out.alpha = clamped_prob(log_ratio);

  bool accepted;
  if (std::isnan(log_ratio) || log_ratio == -std::numeric_limits<double>::infinity()) {
    accepted = false;
  } else if (log_ratio >= 0.0) {
    accepted = true;
  } else {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    accepted = std::log(1.0 - unif(rng)) < log_ratio;  // 1-u lies in (0, 1]
  }
  if (accepted) {
    out.state = candidate;
    out.eval = std::move(cand_eval);
  } else {
    out.state = x;
    out.eval = x_eval;
  }
  out.accepted = accepted;
  return out;
}

ChainRunner::ChainRunner(Posterior& posterior, GaussianProposal proposal,
                         AdaptationConfig adaptation, Algorithm algorithm,
                         std::uint64_t seed)
    : posterior_(&posterior),
      proposal_(std::move(proposal)),
      adaptation_(std::move(adaptation)),
      algorithm_(algorithm),
      rng_(seed) {
  adaptation_.validate();
  record_.algorithm = algorithm;
  record_.seed = seed;
  record_.dim = posterior.dim();
}

bool ChainRunner::accept(double log_ratio) {
  if (std::isnan(log_ratio)) return false;  // both densities degenerate
  if (log_ratio >= 0.0) return true;
  if (log_ratio == -std::numeric_limits<double>::infinity()) return false;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return std::log(1.0 - unif(rng_)) < log_ratio;
}

PosteriorEvaluation ChainRunner::eval_full_counted(const Vector& x) {
  PosteriorEvaluation eval = posterior_->evaluate_full(x);
  ++step_full_evals_;
  step_eval_seconds_ += eval.wall_seconds;
  return eval;
}

PosteriorEvaluation ChainRunner::eval_reduced_counted(const Vector& x) {
  PosteriorEvaluation eval = posterior_->evaluate_reduced(x);
  ++step_reduced_evals_;
  step_eval_seconds_ += eval.wall_seconds;
  return eval;
}

void ChainRunner::ensure_full_current() {
  if (!full_) full_ = eval_full_counted(x_);
}

void ChainRunner::ensure_reduced_current() {
  if (algorithm_ == Algorithm::Reference) return;
  const std::uint64_t generation = posterior_->approximation_generation();
  if (!reduced_ || (posterior_->adaptable() && reduced_->generation != generation)) {
    reduced_ = eval_reduced_counted(x_);
  }
}

void ChainRunner::initialize(const Vector& x0) {
  if (x0.size() != posterior_->dim()) {
    throw DomainError("chain: initial state dimension mismatch");
  }
  x_ = x0;
  record_.samples.push_back(x0);

  if (algorithm_ == Algorithm::Reference) {
    full_ = eval_full_counted(x_);
    if (!full_->admissible) throw DomainError("chain: inadmissible initial state");
    return;
  }

  // Adaptive algorithms start from a one-snapshot basis at the initial state.
  full_ = eval_full_counted(x_);
  if (!full_->admissible) throw DomainError("chain: inadmissible initial state");
  if (posterior_->adaptable() && posterior_->basis_dim() == 0) {
    SnapshotInfo info;
    info.parameter = x_;
    info.chain_step = 0;
    info.source = "initial";
    posterior_->enrich_from(*full_, std::move(info));
  }
  reduced_ = eval_reduced_counted(x_);
}

void ChainRunner::restore(ChainRecord record, const std::string& rng_state,
                          const AdaptationState& adaptation_state) {
  record_ = std::move(record);
  record_.adaptation = adaptation_state;
  if (record_.samples.empty()) {
    throw DomainError("chain restore: record has no states");
  }
  x_ = record_.samples.back();
  std::istringstream is(rng_state);
  is >> rng_;
  if (is.fail()) throw DomainError("chain restore: bad rng state");
  full_.reset();
  reduced_.reset();
}

std::string ChainRunner::rng_state() const {
  std::ostringstream os;
  os << rng_;
  return os.str();
}

void ChainRunner::attach_log(const std::filesystem::path& path, bool resume) {
  if (resume) {
    log_.reopen(path);
  } else {
    if (record_.samples.empty()) {
      throw DomainError("chain: attach_log before initialize");
    }
    log_.open(path, record_);
  }
}

void ChainRunner::update_adaptation_latch() {
  AdaptationState& state = record_.adaptation;
  if (!posterior_->adaptable()) return;
  if (!state.stopped && finite_adaptation_check(state, adaptation_)) {
    state.stopped = true;
    state.stop_reason = "finite adaptation criterion";
  }
  if (state.stopped) return;
  if (posterior_->basis_at_capacity()) {
    if (algorithm_ == Algorithm::EpsApproximate) {
      throw CapacityError(
          "eps-approximate: basis capacity reached before the finite "
          "adaptation criterion; switch to the full target algorithm");
    }
    state.stopped = true;
    state.stop_reason = "basis capacity";
  }
}

void ChainRunner::finish_step(StepRecord step) {
  step.index = record_.adaptation.step_count + 1;
  step.full_evals = step_full_evals_;
  step.reduced_evals = step_reduced_evals_;
  step.wall_ns = static_cast<std::uint64_t>(step_eval_seconds_ * 1e9);
  record_.adaptation.step_count += 1;
  record_.samples.push_back(x_);
  record_.steps.push_back(step);
  record_.final_basis_dim = posterior_->basis_dim();
  if (log_.is_open()) log_.append(x_, record_.steps.back());
}

StepRecord ChainRunner::step() {
  step_full_evals_ = 0;
  step_reduced_evals_ = 0;
  step_eval_seconds_ = 0.0;
  update_adaptation_latch();
  switch (algorithm_) {
    case Algorithm::Reference: return step_reference();
    case Algorithm::FullTarget: return step_full_target();
    case Algorithm::EpsApproximate: return step_eps_approximate();
  }
  throw DomainError("chain: unknown algorithm");
}

void ChainRunner::run(std::size_t n_steps) {
  for (std::size_t i = 0; i < n_steps; ++i) step();
}

ChainRecord ChainRunner::take_record() { return std::move(record_); }

StepRecord ChainRunner::step_reference() {
  ensure_full_current();
  StepRecord step;
  step.eval_kind = StepEvalKind::Full;

  const Vector candidate = proposal_.propose(x_, rng_);
  PosteriorEvaluation cand_eval = eval_full_counted(candidate);
  const double log_ratio = cand_eval.log_posterior - full_->log_posterior;
  step.stage2_prob = clamped_prob(log_ratio);
  const bool accepted = accept(log_ratio);
  step.stage1_accept = accepted;
  step.stage2_accept = accepted;
  if (accepted) {
    x_ = candidate;
    full_ = std::move(cand_eval);
  }
  finish_step(step);
  return record_.steps.back();
}

StepRecord ChainRunner::step_full_target() {
  ensure_full_current();
  ensure_reduced_current();
  StepRecord step;
  const bool adapting = posterior_->adaptable() && !record_.adaptation.stopped;

  // Stage 1: subchain on the approximate posterior, terminated early while
  // adapting if the error indicator at the current subchain state reaches
  // the threshold.
  Vector y = x_;
  PosteriorEvaluation y_eval = *reduced_;
  bool moved = false;
  for (int i = 0; i < adaptation_.subchain_length; ++i) {
    MhStep sub = metropolis_reduced_step(y, y_eval, *posterior_, proposal_, rng_);
    ++step_reduced_evals_;
    step_eval_seconds_ += sub.candidate_wall_seconds;
    y = std::move(sub.state);
    y_eval = std::move(sub.eval);
    if (sub.accepted) moved = true;
    if (adapting && y_eval.indicator_inf >= adaptation_.epsilon) break;
  }
  step.stage1_accept = moved;
  step.indicator_inf = y_eval.indicator_inf;

  if (!moved) {
    // Every proposal was rejected, so the stage-2 candidate equals the
    // current state and the density ratios cancel exactly.
    step.stage2_prob = 1.0;
    step.stage2_accept = true;
    step.eval_kind = StepEvalKind::Reduced;
  } else {
    PosteriorEvaluation cand_full = eval_full_counted(y);
    const double log_beta = (cand_full.log_posterior - full_->log_posterior) +
                            (reduced_->log_posterior - y_eval.log_posterior);
    step.stage2_prob = clamped_prob(log_beta);
    step.stage2_accept = accept(log_beta);
    step.eval_kind = StepEvalKind::Both;
    if (step.stage2_accept) {
      x_ = y;
      full_ = std::move(cand_full);
      reduced_ = std::move(y_eval);
    }
  }

  // Basis refinement from the full evaluation at the new state; the true
  // scaled error is available because the full solve is already paid for.
  if (adapting && !posterior_->basis_at_capacity()) {
    const double true_error = posterior_->true_error_inf(*full_, *reduced_);
    step.true_error_inf = true_error;
    if (true_error >= adaptation_.epsilon) {
      SnapshotInfo info;
      info.parameter = x_;
      info.chain_step = record_.adaptation.step_count + 1;
      info.accepted = step.stage2_accept;
      info.source = "stage2";
      if (posterior_->enrich_from(*full_, std::move(info)) ==
          ReducedBasis::EnrichOutcome::Added) {
        step.enriched = true;
        record_.adaptation.record_enrichment(record_.adaptation.step_count + 1);
      }
    }
  }

  finish_step(step);
  return record_.steps.back();
}

StepRecord ChainRunner::step_eps_approximate() {
  ensure_reduced_current();
  StepRecord step;
  const bool adapting = posterior_->adaptable() && !record_.adaptation.stopped &&
                        !posterior_->basis_at_capacity();

  const Vector candidate = proposal_.propose(x_, rng_);
  PosteriorEvaluation cand_red = eval_reduced_counted(candidate);
  step.indicator_inf = cand_red.indicator_inf;
  const double indicator =
      cand_red.admissible ? cand_red.indicator_inf : -1.0;  // reject via theta

  if (adapting && indicator >= adaptation_.epsilon) {
    if (indicator >= adaptation_.epsilon0) {
      // The approximation is unusable here: discard it and decide with the
      // full posterior directly, enriching at accepted candidates.
      step.branch = 'a';
      step.eval_kind = StepEvalKind::Both;
      ensure_full_current();
      PosteriorEvaluation cand_full = eval_full_counted(candidate);
      const double log_alpha = cand_full.log_posterior - full_->log_posterior;
      step.stage2_prob = clamped_prob(log_alpha);
      const bool accepted = accept(log_alpha);
      step.stage1_accept = accepted;
      step.stage2_accept = accepted;
      if (accepted) {
        x_ = candidate;
        full_ = std::move(cand_full);
        reduced_ = std::move(cand_red);
        SnapshotInfo info;
        info.parameter = x_;
        info.chain_step = record_.adaptation.step_count + 1;
        info.accepted = true;
        info.source = "approx-direct";
        if (posterior_->enrich_from(*full_, std::move(info)) ==
            ReducedBasis::EnrichOutcome::Added) {
          step.enriched = true;
          record_.adaptation.record_enrichment(record_.adaptation.step_count + 1);
        }
      }
    } else {
      // Delayed acceptance for one step; the basis is enriched with the new
      // full evaluation whatever the second-stage outcome.
      step.branch = 'b';
      const double log_beta1 = cand_red.log_posterior - reduced_->log_posterior;
      const bool pass1 = accept(log_beta1);
      step.stage1_accept = pass1;
      if (!pass1) {
        step.eval_kind = StepEvalKind::Reduced;
        step.stage2_prob = 0.0;
        step.stage2_accept = false;
      } else {
        step.eval_kind = StepEvalKind::Both;
        ensure_full_current();
        PosteriorEvaluation cand_full = eval_full_counted(candidate);
        const double log_beta2 =
            (cand_full.log_posterior - full_->log_posterior) +
            (reduced_->log_posterior - cand_red.log_posterior);
        step.stage2_prob = clamped_prob(log_beta2);
        step.stage2_accept = accept(log_beta2);
        const double true_error = posterior_->true_error_inf(cand_full, cand_red);
        step.true_error_inf = true_error;
        if (step.stage2_accept) {
          x_ = candidate;
          full_ = cand_full;
          reduced_ = cand_red;
        }
        SnapshotInfo info;
        info.parameter = candidate;
        info.chain_step = record_.adaptation.step_count + 1;
        info.accepted = step.stage2_accept;
        info.source = "approx-da";
        if (posterior_->enrich_from(cand_full, std::move(info)) ==
            ReducedBasis::EnrichOutcome::Added) {
          step.enriched = true;
          record_.adaptation.record_enrichment(record_.adaptation.step_count + 1);
        }
      }
    }
  } else {
    // Sufficiently accurate (or adaptation over): the approximate posterior
    // decides directly and no full evaluation happens.
    step.branch = 'c';
    step.eval_kind = StepEvalKind::Reduced;
    const double log_theta = cand_red.log_posterior - reduced_->log_posterior;
    step.stage2_prob = clamped_prob(log_theta);
    const bool accepted = accept(log_theta);
    step.stage1_accept = accepted;
    step.stage2_accept = accepted;
    if (accepted) {
      x_ = candidate;
      reduced_ = std::move(cand_red);
      full_.reset();  // unknown at the new state
    }
  }

  finish_step(step);
  return record_.steps.back();
}

ChainRecord run_chain(Posterior& posterior, const GaussianProposal& proposal,
                      const AdaptationConfig& adaptation, Algorithm algorithm,
                      const Vector& x0, std::size_t n_steps, std::uint64_t seed,
                      const std::optional<std::filesystem::path>& checkpoint_dir) {
  ChainRunner runner(posterior, proposal, adaptation, algorithm, seed);
  runner.initialize(x0);
  try {
    runner.run(n_steps);
  } catch (const std::exception&) {
    if (checkpoint_dir) {
      std::filesystem::create_directories(*checkpoint_dir);
      runner.record().save_binary(*checkpoint_dir / "chain.bin");
      std::ofstream state(*checkpoint_dir / "chain.state.txt");
      state << "step_count " << runner.adaptation_state().step_count << "\n";
      state << "rng " << runner.rng_state() << "\n";
    }
    throw;
  }
  return runner.take_record();
}

}  // namespace darom
