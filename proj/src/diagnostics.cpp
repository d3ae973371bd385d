#include "darom/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "darom/errors.hpp"
#include "json.hpp"

namespace darom {

IactResult iact(const Vector& series) {
  const Eigen::Index n = series.size();
  if (n < 10) throw DomainError("iact: need at least 10 points");
  const double mean = series.mean();
  const Vector centered = series.array() - mean;
  const double variance = centered.squaredNorm() / static_cast<double>(n);

  IactResult out;
  if (variance == 0.0) {
    out.value = 0.5;
    out.degenerate = true;
    return out;
  }

  const auto rho = [&](Eigen::Index lag) {
    return centered.head(n - lag).dot(centered.tail(n - lag)) /
           (static_cast<double>(n) * variance);
  };

  // Sum of paired autocorrelations while the pairs stay positive.
  double paired_sum = 0.0;
  Eigen::Index lag = 0;
  while (lag + 1 < n) {
    const double gamma = rho(lag) + rho(lag + 1);
    if (gamma <= 0.0) break;
    paired_sum += gamma;
    lag += 2;
  }
  out.truncation_lag = static_cast<int>(lag);
  // Mildly antithetic chains can push the sum below 1/2; keep a floor so
  // downstream ESS stays bounded by 2N.
  out.value = std::max(paired_sum - 0.5, 0.25);
  return out;
}

EssResult ess(const Matrix& samples) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index dims = samples.cols();
  if (n < 10) throw DomainError("ess: need at least 10 samples");
  EssResult out;
  out.per_component.resize(dims);
  out.iact_per_component.resize(dims);
  out.variance_per_component.resize(dims);
  for (Eigen::Index c = 0; c < dims; ++c) {
    const IactResult r = iact(samples.col(c));
    out.degenerate = out.degenerate || r.degenerate;
    out.iact_per_component[c] = r.value;
    out.per_component[c] = static_cast<double>(n) / (2.0 * r.value);
    const double mean = samples.col(c).mean();
    out.variance_per_component[c] =
        (samples.col(c).array() - mean).square().sum() /
        std::max<double>(1.0, static_cast<double>(n - 1));
  }
  out.min_ess = out.per_component.minCoeff();
  return out;
}

EfficiencyReport efficiency_report(const ChainRecord& record,
                                   std::size_t burn_in, const std::string& label,
                                   double error_threshold) {
  EfficiencyReport report;
  report.label = label;
  report.error_threshold = error_threshold;
  if (record.algorithm == Algorithm::FullTarget) {
    report.avg_beta = record.average_stage2_prob(burn_in);
  }
  report.full_evals = record.total_full_evals();
  report.reduced_evals = record.total_reduced_evals();
  report.basis_dim = record.final_basis_dim;
  report.cpu_time_s = record.eval_wall_seconds();

  const Matrix samples = record.samples_matrix(burn_in);
  const EssResult e = ess(samples);
  report.ess_per_component = e.per_component;
  report.iact_per_component = e.iact_per_component;
  report.variance_per_component = e.variance_per_component;
  report.ess = e.min_ess;
  report.ess_per_s = report.cpu_time_s > 0.0 ? report.ess / report.cpu_time_s : 0.0;
  report.baseline_label = label;
  return report;
}

void set_speedup(EfficiencyReport& report, const EfficiencyReport& baseline) {
  if (baseline.ess_per_s <= 0.0) {
    throw DomainError("speedup: baseline has no positive ESS rate");
  }
  report.speedup = report.ess_per_s / baseline.ess_per_s;
  report.baseline_label = baseline.label;
}

FeasibilityReport feasible_set_measure(PdePosterior& posterior,
                                       const Matrix& samples, double epsilon,
                                       const Matrix* full_outputs) {
  if (samples.rows() == 0) throw DomainError("feasible set: empty sample set");
  if (!posterior.rom()) throw DomainError("feasible set: posterior has no basis");
  FeasibilityReport report;
  report.epsilon = epsilon;
  report.sample_count = static_cast<std::size_t>(samples.rows());
  std::size_t exceed = 0;
  RomEvaluator& rom = *posterior.rom();
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const Vector x = samples.row(i).transpose();
    const RomSolveResult reduced = rom.solve(x);
    Vector full_out;
    if (full_outputs) {
      full_out = full_outputs->col(i);
    } else {
      full_out = posterior.model().solve(x).outputs;
    }
    const double true_err =
        rom.true_scaled_error_with_outputs(full_out, reduced).inf_norm();
    const double indicated = rom.error_indicator(reduced).inf_norm();
    report.indicator_true_pairs.emplace_back(indicated, true_err);
    if (true_err > epsilon) ++exceed;
  }
  report.estimate =
      static_cast<double>(exceed) / static_cast<double>(samples.rows());
  report.mc_zero = (exceed == 0);
  return report;
}

double tightness(const Matrix& posterior_samples, const PriorModel& prior) {
  if (posterior_samples.rows() < 2) {
    throw DomainError("tightness: need at least two samples");
  }
  if (posterior_samples.cols() != prior.dim()) {
    throw DomainError("tightness: dimension mismatch with the prior");
  }
  double product = 1.0;
  const double n = static_cast<double>(posterior_samples.rows());
  for (Eigen::Index c = 0; c < posterior_samples.cols(); ++c) {
    const double mean = posterior_samples.col(c).mean();
    const double var =
        (posterior_samples.col(c).array() - mean).square().sum() / (n - 1.0);
    if (var <= 0.0) throw DomainError("tightness: zero sample variance");
    product *= prior.marginal_std(static_cast<int>(c)) / std::sqrt(var);
  }
  return product;
}

MseTradeoff mse_tradeoff(double var_full, double var_approx, double speedup,
                         double bias) {
  if (var_full <= 0.0) throw DomainError("mse_tradeoff: variance must be positive");
  if (speedup <= 0.0) throw DomainError("mse_tradeoff: speedup must be positive");
  MseTradeoff out;
  const double factor = 1.0 - var_approx / (var_full * speedup);
  if (bias == 0.0) {
    out.tau = std::numeric_limits<double>::infinity();
    return out;
  }
  out.tau = var_full / (bias * bias) * factor;
  out.never_preferable = out.tau < 0.0;
  return out;
}

MseTradeoff mse_tradeoff(const EfficiencyReport& report_full,
                         const EfficiencyReport& report_approx, double bias,
                         int component) {
  const double speedup = report_approx.ess_per_s / report_full.ess_per_s;
  return mse_tradeoff(report_full.variance_per_component[component],
                      report_approx.variance_per_component[component], speedup,
                      bias);
}

std::string summary_record_json(const EfficiencyReport& report) {
  nlohmann::ordered_json j;
  const auto number_or_null = [](double v) -> nlohmann::ordered_json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  j["error_threshold"] = number_or_null(report.error_threshold);
  j["avg_beta"] = number_or_null(report.avg_beta);
  j["full_evals"] = report.full_evals;
  j["basis_dim"] = report.basis_dim;
  j["cpu_time_s"] = report.cpu_time_s;
  j["ess"] = report.ess;
  j["ess_per_s"] = report.ess_per_s;
  j["speedup"] = report.speedup;
  j["mu_complement"] = report.mu_complement ? nlohmann::ordered_json(*report.mu_complement)
                                            : nlohmann::ordered_json(nullptr);
  return j.dump(2);
}

}  // namespace darom
