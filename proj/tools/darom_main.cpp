#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "darom/errors.hpp"
#include "darom/experiment.hpp"

namespace fs = std::filesystem;

namespace {

darom::ExperimentConfig load_config(const std::string& path,
                                    const std::optional<std::uint64_t>& seed,
                                    const std::optional<std::string>& out) {
  darom::ExperimentConfig config = darom::ExperimentConfig::load(path);
  if (seed) config.seed = *seed;
  if (out) config.output = *out;
  return config;
}

int run_verify(const std::string& filter, const char* argv0) {
  // The acceptance criteria live in their own test binary, built next to
  // this one; forward to it.
  fs::path self(argv0);
  fs::path dir = self.has_parent_path() ? self.parent_path() : fs::path(".");
  std::vector<fs::path> candidates = {
      dir / "darom_acceptance", dir / "../tests/darom_acceptance",
      fs::path("./darom_acceptance")};
  for (const auto& candidate : candidates) {
    if (fs::exists(candidate)) {
      std::string cmd = candidate.string();
      if (!filter.empty()) cmd += " --test-case=\"*" + filter + "*\"";
      std::cout << "running acceptance suite: " << cmd << "\n";
      const int rc = std::system(cmd.c_str());
      return rc == 0 ? 0 : 1;
    }
  }
  std::cerr << "verify: darom_acceptance binary not found next to the CLI; "
               "build the test suites first\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"darom: delayed-acceptance MCMC with data-driven reduced bases"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  bool resume = false;
  std::string baseline_path;

  auto* run = app.add_subcommand("run", "run one configured experiment");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--seed", seed_override, "override experiment.seed");
  run->add_option("--out", out_override, "override experiment.output");
  run->add_option("--baseline", baseline_path,
                  "efficiency.json of a baseline run (fills the speedup)");
  run->add_flag("--resume", resume, "continue an interrupted run");

  auto* pod = app.add_subcommand("pod-study",
                                 "data-driven vs prior-POD accuracy table");
  std::string reference_run, data_driven_run, study_out;
  std::vector<int> dims{20, 40};
  int pod_snapshots = 2000;
  double pod_energy = 1e-8;
  int eval_samples = 200;
  pod->add_option("--config", config_path, "problem config file")->required();
  pod->add_option("--reference-run", reference_run,
                  "directory of a reference chain run")->required();
  pod->add_option("--basis-run", data_driven_run,
                  "directory of an adaptive run (data-driven basis)")->required();
  pod->add_option("--out", study_out, "output CSV path")->required();
  pod->add_option("--dims", dims, "basis dimensions to compare");
  pod->add_option("--snapshots", pod_snapshots, "prior snapshots for POD");
  pod->add_option("--energy", pod_energy, "POD trailing-energy criterion");
  pod->add_option("--eval-samples", eval_samples, "posterior samples to average over");

  auto* snr = app.add_subcommand("snr-study",
                                 "basis dimension and tightness vs SNR");
  std::vector<double> snr_values{10, 50, 100};
  int jobs = 2;
  snr->add_option("--config", config_path, "base config file")->required();
  snr->add_option("--out", study_out, "output CSV path")->required();
  snr->add_option("--snr", snr_values, "SNR values to sweep");
  snr->add_option("--jobs", jobs, "concurrent runs");

  auto* exp = app.add_subcommand("export", "plot-ready CSV artifacts of a run");
  std::string run_dir;
  std::size_t burn_in = 0;
  exp->add_option("run_dir", run_dir, "run directory")->required();
  exp->add_option("--burn-in", burn_in, "samples to discard");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  std::string filter;
  verify->add_option("--filter", filter, "substring filter on criteria");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const darom::ExperimentConfig config =
          load_config(config_path, seed_override, out_override);
      std::optional<fs::path> baseline;
      if (!baseline_path.empty()) baseline = baseline_path;
      const darom::RunOutputs outputs =
          darom::run_experiment(config, resume, baseline);
      std::cout << "run complete: " << outputs.directory.string() << " ("
                << outputs.record.steps.size() << " steps, basis dim "
                << outputs.record.final_basis_dim << ")\n";
      if (!outputs.record.steps.empty()) {
        std::cout << darom::summary_record_json(outputs.report) << "\n";
      }
    } else if (pod->parsed()) {
      const darom::ExperimentConfig config =
          load_config(config_path, seed_override, out_override);
      const auto rows = darom::study_pod_comparison(
          config, reference_run, data_driven_run, dims, pod_snapshots,
          pod_energy, eval_samples);
      darom::save_pod_study_csv(rows, study_out);
      std::cout << "pod study written to " << study_out << "\n";
    } else if (snr->parsed()) {
      const darom::ExperimentConfig config =
          load_config(config_path, seed_override, out_override);
      const auto rows = darom::study_snr_sweep(config, snr_values, jobs);
      darom::save_snr_study_csv(rows, study_out);
      std::cout << "snr study written to " << study_out << "\n";
    } else if (exp->parsed()) {
      darom::export_run(run_dir, burn_in);
      std::cout << "exported " << run_dir << "\n";
    } else if (verify->parsed()) {
      return run_verify(filter, argv[0]);
    }
  } catch (const darom::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
