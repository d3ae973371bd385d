#include "darom/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "darom/errors.hpp"
#include "json.hpp"

namespace darom {

namespace {

// splitmix64; derives independent per-purpose seeds from the base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

PdePosterior* ProblemSetup::pde_posterior() {
  return dynamic_cast<PdePosterior*>(posterior.get());
}

Vector rbf9d_truth() {
  Vector truth(9);
  truth << 1.2, 0.6, 2.4, 0.9, 3.0, 0.5, 1.8, 0.7, 1.5;
  return truth;
}

Vector gp_truth_field(const Mesh& mesh) {
  Vector field(mesh.node_count());
  for (int g = 0; g < mesh.node_count(); ++g) {
    const double x = mesh.nodes(g, 0);
    const double y = mesh.nodes(g, 1);
    const double b1 = 1.2 * std::exp(-((x - 0.3) * (x - 0.3) + (y - 0.4) * (y - 0.4)) /
                                     (2.0 * 0.12 * 0.12));
    const double b2 = -0.9 * std::exp(-((x - 0.75) * (x - 0.75) + (y - 0.7) * (y - 0.7)) /
                                      (2.0 * 0.10 * 0.10));
    field[g] = std::exp(b1 + b2);
  }
  return field;
}

ProblemSetup build_problem(const ExperimentConfig& config, bool with_basis) {
  config.validate();
  ProblemSetup setup;

  if (config.problem == ProblemKind::Toy2d) {
    auto toy = std::make_shared<ToyPosterior>(
        ToySpec::standard_2d(config.toy_approx_amp));
    setup.posterior = toy;
    setup.initial_state = Vector::Zero(2);
    return setup;
  }

  Mesh mesh = build_mesh(config.mesh_nx, config.mesh_ny);
  ObservationOperator obs =
      ObservationOperator::interior_grid(mesh, config.sensor_spacing);

  if (config.problem == ProblemKind::Rbf9d) {
    PermeabilityMap map = PermeabilityMap::rbf_default(mesh);
    setup.model = std::make_shared<ForwardModel>(std::move(mesh), std::move(map),
                                                 std::move(obs));
    setup.prior = std::make_shared<PriorModel>(
        PriorModel::independent_log_normal(9, config.sigma0));
    auto [dataset, noise] =
        generate_data(*setup.model, rbf9d_truth(), config.snr, config.noise_seed);
    setup.dataset = std::move(dataset);
    setup.noise = std::move(noise);
    setup.initial_state = Vector::Ones(9);
  } else {
    PermeabilityMap map = PermeabilityMap::kl_expansion(
        mesh, config.kl_length_scale, config.kl_energy);
    const int np = map.parameter_dim();
    const Vector truth_field = gp_truth_field(mesh);
    setup.model = std::make_shared<ForwardModel>(std::move(mesh), std::move(map),
                                                 std::move(obs));
    setup.prior =
        std::make_shared<PriorModel>(PriorModel::standard_gaussian_kl(np));
    auto [dataset, noise] = generate_data_from_field(
        *setup.model, truth_field, config.snr, config.noise_seed,
        "two-bump log-permeability field (not in the prior range)");
    setup.dataset = std::move(dataset);
    setup.noise = std::move(noise);
    setup.initial_state = Vector::Zero(np);
  }

  if (with_basis) {
    setup.basis = std::make_shared<ReducedBasis>(setup.model->state_dim(),
                                                 config.max_basis_dim);
  }
  setup.posterior = std::make_shared<PdePosterior>(
      *setup.model, *setup.prior, *setup.dataset, *setup.noise, setup.basis);
  return setup;
}

GaussianProposal calibrate_proposal(const ExperimentConfig& config) {
  ProblemSetup pilot_setup =
      build_problem(config, /*with_basis=*/config.problem != ProblemKind::Toy2d);
  const int np = pilot_setup.posterior->dim();

  ProposalConfig isotropic;
  isotropic.covariance =
      Matrix::Identity(np, np) * (config.pilot_scale * config.pilot_scale);
  isotropic.scale = 1.0;
  isotropic.provenance = "isotropic, scale " + std::to_string(config.pilot_scale);
  if (config.pilot_steps == 0) {
    ProposalConfig out = isotropic;
    if (config.proposal_scale > 0.0) out.scale = config.proposal_scale;
    return GaussianProposal(out);
  }

  AdaptationConfig adaptation{config.epsilon, config.epsilon0,
                              config.subchain_length, config.max_basis_dim,
                              config.criterion_c};
  ChainRunner pilot(*pilot_setup.posterior, GaussianProposal(isotropic),
                    adaptation, Algorithm::EpsApproximate,
                    derive_seed(config.pilot_seed, 0));
  pilot.initialize(pilot_setup.initial_state);
  pilot.run(config.pilot_steps);
  const ChainRecord& record = pilot.record();

  const std::size_t burn = config.pilot_steps / 5;
  const Matrix samples = record.samples_matrix(burn);
  const Vector mean = samples.colwise().mean();
  Matrix cov = (samples.rowwise() - mean.transpose()).transpose() *
               (samples.rowwise() - mean.transpose()) /
               std::max<double>(1.0, static_cast<double>(samples.rows() - 1));
  // Ridge keeps the factorization healthy when the pilot barely moved.
  cov += Matrix::Identity(np, np) *
         std::max(1e-12, 1e-6 * cov.diagonal().maxCoeff());

  ProposalConfig out;
  out.covariance = std::move(cov);
  out.scale = config.proposal_scale;  // <= 0 resolves to 2.38/sqrt(np)
  std::ostringstream note;
  note << "pilot eps_approx run, " << config.pilot_steps << " steps, seed "
       << config.pilot_seed << ", burn-in " << burn;
  out.provenance = note.str();
  return GaussianProposal(out);
}

void save_efficiency_json(const EfficiencyReport& report,
                          const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["label"] = report.label;
  j["error_threshold"] = report.error_threshold;
  j["avg_beta"] = std::isnan(report.avg_beta) ? nlohmann::ordered_json(nullptr)
                                              : nlohmann::ordered_json(report.avg_beta);
  j["full_evals"] = report.full_evals;
  j["reduced_evals"] = report.reduced_evals;
  j["basis_dim"] = report.basis_dim;
  j["cpu_time_s"] = report.cpu_time_s;
  j["ess"] = report.ess;
  j["ess_per_s"] = report.ess_per_s;
  j["speedup"] = report.speedup;
  j["baseline"] = report.baseline_label;
  j["ess_per_component"] = std::vector<double>(
      report.ess_per_component.data(),
      report.ess_per_component.data() + report.ess_per_component.size());
  j["iact_per_component"] = std::vector<double>(
      report.iact_per_component.data(),
      report.iact_per_component.data() + report.iact_per_component.size());
  j["variance_per_component"] = std::vector<double>(
      report.variance_per_component.data(),
      report.variance_per_component.data() + report.variance_per_component.size());
  if (report.mu_complement) {
    j["mu_complement"] = *report.mu_complement;
    j["mu_mc_zero"] = report.mu_mc_zero;
  } else {
    j["mu_complement"] = nullptr;
  }
  std::ofstream os(path);
  os << j.dump(2) << "\n";
}

EfficiencyReport load_efficiency_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("efficiency report: cannot open " + path.string());
  nlohmann::json j;
  is >> j;
  EfficiencyReport report;
  report.label = j.at("label").get<std::string>();
  report.error_threshold = j.at("error_threshold").is_null()
                               ? std::numeric_limits<double>::quiet_NaN()
                               : j.at("error_threshold").get<double>();
  report.avg_beta = j.at("avg_beta").is_null()
                        ? std::numeric_limits<double>::quiet_NaN()
                        : j.at("avg_beta").get<double>();
  report.full_evals = j.at("full_evals").get<std::uint64_t>();
  report.reduced_evals = j.at("reduced_evals").get<std::uint64_t>();
  report.basis_dim = j.at("basis_dim").get<int>();
  report.cpu_time_s = j.at("cpu_time_s").get<double>();
  report.ess = j.at("ess").get<double>();
  report.ess_per_s = j.at("ess_per_s").get<double>();
  report.speedup = j.at("speedup").get<double>();
  report.baseline_label = j.at("baseline").get<std::string>();
  const auto to_vector = [](const nlohmann::json& arr) {
    Vector v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i];
    return v;
  };
  report.ess_per_component = to_vector(j.at("ess_per_component"));
  report.iact_per_component = to_vector(j.at("iact_per_component"));
  report.variance_per_component = to_vector(j.at("variance_per_component"));
  if (!j.at("mu_complement").is_null()) {
    report.mu_complement = j.at("mu_complement").get<double>();
    report.mu_mc_zero = j.value("mu_mc_zero", false);
  }
  return report;
}

namespace {

void write_chain_state(const std::filesystem::path& path,
                       const ChainRunner& runner) {
  std::ofstream os(path);
  const AdaptationState& st = runner.adaptation_state();
  os << "darom-chain-state 1\n";
  os << "steps " << st.step_count << "\n";
  os << "stopped " << (st.stopped ? 1 : 0) << "\n";
  os << "stop_reason " << st.stop_reason << "\n";
  os << "enrichments " << st.enrichment_steps.size();
  for (const auto s : st.enrichment_steps) os << " " << s;
  os << "\n";
  os << "rng " << runner.rng_state() << "\n";
}

std::pair<AdaptationState, std::string> read_chain_state(
    const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("chain state: cannot open " + path.string());
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (tag != "darom-chain-state" || version != 1) {
    throw DomainError("chain state: unrecognized header");
  }
  AdaptationState state;
  int stopped = 0;
  is >> tag >> state.step_count;
  is >> tag >> stopped;
  state.stopped = stopped != 0;
  is >> tag;
  std::getline(is, state.stop_reason);
  if (!state.stop_reason.empty() && state.stop_reason.front() == ' ') {
    state.stop_reason.erase(0, 1);
  }
  std::size_t count = 0;
  is >> tag >> count;
  state.enrichment_steps.resize(count);
  for (auto& s : state.enrichment_steps) is >> s;
  state.enrichment_count = count;
  is >> tag;
  std::string rng_state;
  std::getline(is, rng_state);
  if (!rng_state.empty() && rng_state.front() == ' ') rng_state.erase(0, 1);
  if (!is) throw DomainError("chain state: truncated file");
  return {std::move(state), std::move(rng_state)};
}

}  // namespace

RunOutputs run_experiment(const ExperimentConfig& config, bool resume,
                          const std::optional<std::filesystem::path>& baseline_efficiency) {
  config.validate();
  const std::filesystem::path dir(config.output);
  std::filesystem::create_directories(dir);
  config.save(dir / "config.ini");

  const bool adaptive = config.algorithm != Algorithm::Reference;
  ProblemSetup setup = build_problem(
      config, adaptive && config.problem != ProblemKind::Toy2d);

  if (setup.dataset) {
    setup.dataset->save(dir / "dataset.txt", setup.model->observation(),
                        *setup.noise);
  }

  GaussianProposal proposal = calibrate_proposal(config);
  AdaptationConfig adaptation{config.epsilon, config.epsilon0,
                              config.subchain_length, config.max_basis_dim,
                              config.criterion_c};

  ChainRunner runner(*setup.posterior, proposal, adaptation, config.algorithm,
                     derive_seed(config.seed, 1));

  std::uint64_t remaining = config.iterations;
  if (resume) {
    ChainRecord previous = ChainRecord::load_binary(dir / "chain.bin");
    auto [adapt_state, rng_state] = read_chain_state(dir / "chain.state.txt");
    if (setup.basis && std::filesystem::exists(dir / "basis.drb")) {
      *setup.basis = ReducedBasis::load(dir / "basis.drb");
    }
    const std::uint64_t done = previous.steps.size();
    if (done >= config.iterations) {
      remaining = 0;
    } else {
      remaining = config.iterations - done;
    }
    runner.restore(std::move(previous), rng_state, adapt_state);
    runner.attach_log(dir / "chain.bin", /*resume=*/true);
  } else {
    runner.initialize(setup.initial_state);
    runner.attach_log(dir / "chain.bin", /*resume=*/false);
  }

  try {
    runner.run(remaining);
  } catch (const std::exception&) {
    // Leave a resumable checkpoint behind: the streamed log plus rng and
    // adaptation state, and the basis so far.
    write_chain_state(dir / "chain.state.txt", runner);
    if (setup.basis) setup.basis->save(dir / "basis.drb");
    throw;
  }

  write_chain_state(dir / "chain.state.txt", runner);
  if (setup.basis) setup.basis->save(dir / "basis.drb");

  RunOutputs out;
  out.directory = dir;
  out.record = runner.take_record();
  out.record.save_csv(dir / "chain.csv");

  const std::string label = problem_name(config.problem) + "/" +
                            algorithm_name(config.algorithm);
  double threshold = std::numeric_limits<double>::quiet_NaN();
  if (config.algorithm != Algorithm::Reference) threshold = config.epsilon;
  if (out.record.steps.size() > 10 + config.burn_in) {
    out.report = efficiency_report(out.record, config.burn_in, label, threshold);
    if (baseline_efficiency) {
      const EfficiencyReport baseline = load_efficiency_json(*baseline_efficiency);
      set_speedup(out.report, baseline);
    }
    save_efficiency_json(out.report, dir / "efficiency.json");
    std::ofstream os(dir / "summary.json");
    os << summary_record_json(out.report) << "\n";
  }
  return out;
}

std::vector<PodStudyRow> study_pod_comparison(
    const ExperimentConfig& config, const std::filesystem::path& reference_run,
    const std::filesystem::path& data_driven_run, const std::vector<int>& dims,
    int pod_snapshots, double pod_energy, int eval_samples) {
  if (!std::filesystem::exists(reference_run / "chain.bin")) {
    throw DomainError("pod study: missing reference chain at " +
                      (reference_run / "chain.bin").string());
  }
  if (!std::filesystem::exists(data_driven_run / "basis.drb")) {
    throw DomainError("pod study: missing data-driven basis at " +
                      (data_driven_run / "basis.drb").string());
  }
  ProblemSetup setup = build_problem(config, /*with_basis=*/false);
  if (!setup.model) throw DomainError("pod study: toy problem has no basis study");

  const ChainRecord reference = ChainRecord::load_binary(reference_run / "chain.bin");
  const Matrix all = reference.samples_matrix(config.burn_in);
  const int stride =
      std::max<int>(1, static_cast<int>(all.rows() / std::max(1, eval_samples)));
  std::vector<int> rows;
  for (int r = 0; r < all.rows(); r += stride) rows.push_back(r);

  const ReducedBasis data_driven = ReducedBasis::load(data_driven_run / "basis.drb");
  auto [pod, spectrum] = pod_from_prior(*setup.model, *setup.prior, pod_snapshots,
                                        pod_energy, derive_seed(config.seed, 17));

  // Full-model outputs once per sample, shared by every basis.
  Matrix full_outputs(setup.model->output_dim(), static_cast<int>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    full_outputs.col(static_cast<int>(i)) =
        setup.model->solve(all.row(rows[i]).transpose()).outputs;
  }

  std::vector<PodStudyRow> out;
  for (const int m : dims) {
    for (const auto& [name, basis] :
         {std::pair<const char*, const ReducedBasis*>{"data_driven", &data_driven},
          std::pair<const char*, const ReducedBasis*>{"prior_pod", &pod}}) {
      if (basis->dim() < m) {
        throw DomainError(std::string("pod study: basis '") + name +
                          "' has fewer than " + std::to_string(m) + " columns");
      }
      const ReducedBasis truncated = basis->truncated(m);
      RomEvaluator rom(*setup.model, truncated, *setup.noise);
      double sum = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const RomSolveResult reduced =
            rom.solve(all.row(rows[i]).transpose());
        sum += rom.true_scaled_error_with_outputs(
                      full_outputs.col(static_cast<int>(i)), reduced)
                   .inf_norm();
      }
      out.push_back({name, m, sum / static_cast<double>(rows.size())});
    }
  }
  return out;
}

void save_pod_study_csv(const std::vector<PodStudyRow>& rows,
                        const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw DomainError("pod study: cannot open " + path.string());
  std::fprintf(f, "method,m,avg_linf_error\n");
  for (const auto& r : rows) {
    std::fprintf(f, "%s,%d,%.17g\n", r.method.c_str(), r.m, r.avg_linf_error);
  }
  std::fclose(f);
}

std::vector<SnrStudyRow> study_snr_sweep(const ExperimentConfig& base,
                                         const std::vector<double>& snr_values,
                                         int jobs) {
  if (snr_values.empty()) throw DomainError("snr study: empty SNR list");
  if (jobs <= 0) jobs = 2;

  const auto run_point = [&base](double snr, int index) {
    ExperimentConfig config = base;
    config.snr = snr;
    config.algorithm = Algorithm::EpsApproximate;
    config.noise_seed = derive_seed(base.noise_seed, 100 + index);
    config.seed = derive_seed(base.seed, 200 + index);

    ProblemSetup setup = build_problem(config, /*with_basis=*/true);
    GaussianProposal proposal = calibrate_proposal(config);
    AdaptationConfig adaptation{config.epsilon, config.epsilon0,
                                config.subchain_length, config.max_basis_dim,
                                config.criterion_c};
    ChainRunner runner(*setup.posterior, proposal, adaptation,
                       Algorithm::EpsApproximate, derive_seed(config.seed, 1));
    runner.initialize(setup.initial_state);
    runner.run(config.iterations);
    const ChainRecord record = runner.take_record();
    SnrStudyRow row;
    row.snr = snr;
    row.final_basis_dim = record.final_basis_dim;
    row.tightness = tightness(record.samples_matrix(config.burn_in), *setup.prior);
    return row;
  };

  std::vector<SnrStudyRow> out(snr_values.size());
  std::size_t next = 0;
  while (next < snr_values.size()) {
    std::vector<std::future<SnrStudyRow>> batch;
    for (int j = 0; j < jobs && next < snr_values.size(); ++j, ++next) {
      batch.push_back(std::async(std::launch::async, run_point,
                                 snr_values[next], static_cast<int>(next)));
    }
    for (std::size_t j = 0; j < batch.size(); ++j) {
      out[next - batch.size() + j] = batch[j].get();
    }
  }
  return out;
}

void save_snr_study_csv(const std::vector<SnrStudyRow>& rows,
                        const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw DomainError("snr study: cannot open " + path.string());
  std::fprintf(f, "snr,tightness,final_basis_dim\n");
  for (const auto& r : rows) {
    std::fprintf(f, "%.17g,%.17g,%d\n", r.snr, r.tightness, r.final_basis_dim);
  }
  std::fclose(f);
}

void export_run(const std::filesystem::path& run_dir, std::size_t burn_in) {
  const auto chain_path = run_dir / "chain.bin";
  if (!std::filesystem::exists(chain_path)) {
    throw DomainError("export: no chain log in " + run_dir.string());
  }
  const ChainRecord record = ChainRecord::load_binary(chain_path);
  record.save_csv(run_dir / "chain.csv");

  constexpr int kBins = 50;
  std::FILE* fm = std::fopen((run_dir / "marginals.csv").string().c_str(), "w");
  if (!fm) throw DomainError("export: cannot write marginals.csv");
  std::fprintf(fm, "component,bin_index,bin_left,bin_right,count\n");
  std::FILE* fp = std::fopen((run_dir / "pairwise.csv").string().c_str(), "w");
  if (!fp) {
    std::fclose(fm);
    throw DomainError("export: cannot write pairwise.csv");
  }
  std::fprintf(fp, "comp_i,comp_j,bin_i,bin_j,count\n");

  if (record.steps.empty()) {  // headers only for an empty chain
    std::fclose(fm);
    std::fclose(fp);
    return;
  }

  const Matrix samples = record.samples_matrix(burn_in);
  const auto edges = [&](int c) {
    double lo = samples.col(c).minCoeff();
    double hi = samples.col(c).maxCoeff();
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    return std::make_pair(lo, hi);
  };
  const auto bin_of = [&](double v, double lo, double hi) {
    const int b = static_cast<int>((v - lo) / (hi - lo) * kBins);
    return std::min(std::max(b, 0), kBins - 1);
  };

  for (int c = 0; c < record.dim; ++c) {
    const auto [lo, hi] = edges(c);
    std::vector<long> counts(kBins, 0);
    for (Eigen::Index r = 0; r < samples.rows(); ++r) {
      ++counts[bin_of(samples(r, c), lo, hi)];
    }
    const double width = (hi - lo) / kBins;
    for (int b = 0; b < kBins; ++b) {
      std::fprintf(fm, "%d,%d,%.17g,%.17g,%ld\n", c + 1, b, lo + b * width,
                   lo + (b + 1) * width, counts[b]);
    }
  }
  for (int ci = 0; ci < record.dim; ++ci) {
    for (int cj = ci + 1; cj < record.dim; ++cj) {
      const auto [lo_i, hi_i] = edges(ci);
      const auto [lo_j, hi_j] = edges(cj);
      std::vector<long> counts(static_cast<std::size_t>(kBins) * kBins, 0);
      for (Eigen::Index r = 0; r < samples.rows(); ++r) {
        const int bi = bin_of(samples(r, ci), lo_i, hi_i);
        const int bj = bin_of(samples(r, cj), lo_j, hi_j);
        ++counts[static_cast<std::size_t>(bi) * kBins + bj];
      }
      for (int bi = 0; bi < kBins; ++bi) {
        for (int bj = 0; bj < kBins; ++bj) {
          const long n = counts[static_cast<std::size_t>(bi) * kBins + bj];
          if (n != 0) {
            std::fprintf(fp, "%d,%d,%d,%d,%ld\n", ci + 1, cj + 1, bi, bj, n);
          }
        }
      }
    }
  }
  std::fclose(fm);
  std::fclose(fp);
}

}  // namespace darom
