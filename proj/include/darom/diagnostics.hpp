#pragma once

#include <optional>
#include <string>
#include <vector>

#include "darom/chain.hpp"
#include "darom/posterior.hpp"
#include "darom/prior.hpp"

namespace darom {

struct IactResult {
  double value = 0.5;
  bool degenerate = false;  // constant series
  int truncation_lag = 0;
};

/// Integrated autocorrelation 1/2 + sum of autocorrelations, truncated by
/// Geyer's initial-positive-sequence rule on paired lags. A constant series
/// yields 1/2 with the degeneracy flag set.
IactResult iact(const Vector& series);

struct EssResult {
  Vector per_component;      // N / (2 IACT) per estimand component
  Vector iact_per_component;
  Vector variance_per_component;  // sample variance of each component
  double min_ess = 0.0;
  bool degenerate = false;
};

/// ESS of each column of `samples` (rows = draws).
EssResult ess(const Matrix& samples);

/// Efficiency summary of one run, mirroring the experiment tables.
struct EfficiencyReport {
  std::string label;
  double error_threshold = std::numeric_limits<double>::quiet_NaN();
  double avg_beta = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t full_evals = 0;
  std::uint64_t reduced_evals = 0;
  int basis_dim = 0;
  double cpu_time_s = 0.0;  // posterior-evaluation wall time only
  Vector ess_per_component;
  Vector iact_per_component;
  Vector variance_per_component;
  double ess = 0.0;  // per-component minimum
  double ess_per_s = 0.0;
  double speedup = 1.0;  // vs the named baseline; 1 when self-referenced
  std::string baseline_label;
  std::optional<double> mu_complement;
  bool mu_mc_zero = false;
};

EfficiencyReport efficiency_report(const ChainRecord& record,
                                   std::size_t burn_in, const std::string& label,
                                   double error_threshold =
                                       std::numeric_limits<double>::quiet_NaN());

/// Fills the speedup entry of `report` against `baseline` (ESS rate ratio).
void set_speedup(EfficiencyReport& report, const EfficiencyReport& baseline);

/// Monte Carlo estimate of the posterior measure outside the eps-feasible
/// set, with the per-sample (indicator, true error) pairs retained.
struct FeasibilityReport {
  double epsilon = 0.0;
  double estimate = 0.0;  // fraction of samples with |t|_inf > eps
  std::size_t sample_count = 0;
  bool mc_zero = false;   // a zero estimate is Monte Carlo zero, not exact
  std::vector<std::pair<double, double>> indicator_true_pairs;
};

/// Evaluates the true scaled error over reference posterior samples (rows of
/// `samples`); `full_outputs`, when given, holds precomputed full-model
/// outputs per sample (column j for row j).
FeasibilityReport feasible_set_measure(PdePosterior& posterior,
                                       const Matrix& samples, double epsilon,
                                       const Matrix* full_outputs = nullptr);

/// Posterior tightness: product over components of prior-to-posterior
/// marginal standard-deviation ratios.
double tightness(const Matrix& posterior_samples, const PriorModel& prior);

/// Decision bound for sampling the approximation: tau and the verdict.
struct MseTradeoff {
  double tau = 0.0;  // +inf when the bias estimate is zero
  bool approx_preferable_at(double target_ess) const { return target_ess <= tau; }
  bool never_preferable = false;  // tau < 0 (speedup below the variance ratio)
};

MseTradeoff mse_tradeoff(double var_full, double var_approx, double speedup,
                         double bias);
MseTradeoff mse_tradeoff(const EfficiencyReport& report_full,
                         const EfficiencyReport& report_approx, double bias,
                         int component = 0);

/// JSON summary record with the exact field set
/// {error_threshold, avg_beta, full_evals, basis_dim, cpu_time_s, ess,
///  ess_per_s, speedup, mu_complement}; unavailable entries are null.
std::string summary_record_json(const EfficiencyReport& report);

}  // namespace darom
