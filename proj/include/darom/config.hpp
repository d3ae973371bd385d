#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "darom/chain.hpp"

namespace darom {

enum class ProblemKind { Rbf9d, GpHighdim, Toy2d };

std::string problem_name(ProblemKind kind);
ProblemKind problem_from_name(const std::string& name);

/// Experiment description; flat key-value sections, round-trippable through
/// emit()/parse(). Unknown sections or keys are errors.
struct ExperimentConfig {
  // [experiment]
  ProblemKind problem = ProblemKind::Rbf9d;
  Algorithm algorithm = Algorithm::FullTarget;
  std::uint64_t iterations = 10000;
  std::uint64_t burn_in = 2000;
  std::uint64_t seed = 1;
  std::string output = "runs/out";

  // [mesh]
  int mesh_nx = 60;
  int mesh_ny = 60;

  // [data]
  double snr = 50.0;
  std::uint64_t noise_seed = 99;

  // [prior]
  double sigma0 = 2.0;

  // [kl]
  double kl_length_scale = 0.25;
  double kl_energy = 0.9999;

  // [toy]
  double toy_approx_amp = 0.0;

  // [sensors]
  double sensor_spacing = 0.1;

  // [adaptation]
  double epsilon = 1e-1;
  double epsilon0 = 1.0;
  int subchain_length = 50;
  int max_basis_dim = 200;
  double criterion_c = 0.1;

  // [proposal]
  std::uint64_t pilot_steps = 2000;
  double pilot_scale = 0.1;
  std::uint64_t pilot_seed = 7;
  double proposal_scale = 0.0;  // 0 = default 2.38/sqrt(N_p)

  void validate() const;
  std::string emit() const;
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  bool operator==(const ExperimentConfig&) const = default;
};

}  // namespace darom
