#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "darom/config.hpp"
#include "darom/diagnostics.hpp"
#include "darom/pod.hpp"
#include "darom/sampler.hpp"
#include "darom/toy.hpp"

namespace darom {

/// Everything a configured problem needs to sample: model, prior, data and
/// the posterior pair. For the toy problem the PDE members stay empty.
struct ProblemSetup {
  std::shared_ptr<ForwardModel> model;
  std::shared_ptr<PriorModel> prior;
  std::optional<Dataset> dataset;
  std::optional<NoiseModel> noise;
  std::shared_ptr<ReducedBasis> basis;
  std::shared_ptr<Posterior> posterior;
  Vector initial_state;

  PdePosterior* pde_posterior();
};

/// Builds mesh, map, prior, synthetic data and the posterior (with a fresh
/// basis for the adaptive algorithms).
ProblemSetup build_problem(const ExperimentConfig& config, bool with_basis);

/// The fixed synthetic truths: a documented 9-weight vector for the bump
/// parameterization, and a smooth two-bump log-permeability field (outside
/// the prior's range) for the high-dimensional problem.
Vector rbf9d_truth();
Vector gp_truth_field(const Mesh& mesh);

/// Pilot-run proposal: a short eps-approximate chain with an isotropic
/// proposal estimates the posterior covariance; falls back to the isotropic
/// covariance when pilot_steps is zero.
GaussianProposal calibrate_proposal(const ExperimentConfig& config);

struct RunOutputs {
  std::filesystem::path directory;
  ChainRecord record;
  EfficiencyReport report;
};

/// Runs one configured experiment into config.output: chain log + CSV,
/// basis checkpoint, dataset, config echo, efficiency and summary records.
/// `resume` continues from an interrupted run's checkpoint files.
RunOutputs run_experiment(const ExperimentConfig& config, bool resume = false,
                          const std::optional<std::filesystem::path>&
                              baseline_efficiency = std::nullopt);

void save_efficiency_json(const EfficiencyReport& report,
                          const std::filesystem::path& path);
EfficiencyReport load_efficiency_json(const std::filesystem::path& path);

/// Accuracy-vs-dimension comparison of the adaptively built basis against
/// the prior POD baseline, averaged over posterior samples.
struct PodStudyRow {
  std::string method;  // "data_driven" | "prior_pod"
  int m = 0;
  double avg_linf_error = 0.0;
};

std::vector<PodStudyRow> study_pod_comparison(
    const ExperimentConfig& config, const std::filesystem::path& reference_run,
    const std::filesystem::path& data_driven_run, const std::vector<int>& dims,
    int pod_snapshots, double pod_energy, int eval_samples = 200);

void save_pod_study_csv(const std::vector<PodStudyRow>& rows,
                        const std::filesystem::path& path);

/// One adaptive eps-approximate construction per signal-to-noise ratio;
/// reports posterior tightness and the final basis dimension.
struct SnrStudyRow {
  double snr = 0.0;
  double tightness = 0.0;
  int final_basis_dim = 0;
};

std::vector<SnrStudyRow> study_snr_sweep(const ExperimentConfig& base,
                                         const std::vector<double>& snr_values,
                                         int jobs = 0);

void save_snr_study_csv(const std::vector<SnrStudyRow>& rows,
                        const std::filesystem::path& path);

/// Plot-ready artifacts from a run directory: chain CSV, 50-bin marginal
/// histograms and pairwise 2D histograms.
void export_run(const std::filesystem::path& run_dir, std::size_t burn_in);

}  // namespace darom
