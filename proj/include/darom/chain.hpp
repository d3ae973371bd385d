#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "darom/adaptation.hpp"
#include "darom/mesh.hpp"

namespace darom {

enum class Algorithm { Reference, FullTarget, EpsApproximate };

std::string algorithm_name(Algorithm algorithm);
Algorithm algorithm_from_name(const std::string& name);

enum class StepEvalKind : std::uint8_t { None = 0, Full = 1, Reduced = 2, Both = 3 };

/// Per-step metadata. `stage2_prob` holds the final acceptance probability
/// of the step (beta for the full target stage, alpha/theta for single-stage
/// decisions). `branch` tags the eps-approximate path taken ('a', 'b', 'c';
/// '-' otherwise).
struct StepRecord {
  std::uint64_t index = 0;
  bool stage1_accept = false;
  double stage2_prob = 0.0;
  bool stage2_accept = false;
  double indicator_inf = std::numeric_limits<double>::quiet_NaN();
  double true_error_inf = std::numeric_limits<double>::quiet_NaN();
  StepEvalKind eval_kind = StepEvalKind::None;
  bool enriched = false;
  char branch = '-';
  std::uint16_t full_evals = 0;
  std::uint16_t reduced_evals = 0;
  std::uint64_t wall_ns = 0;  // posterior-evaluation time within the step
};

/// Ordered samples with per-step metadata; samples[0] is the initial state,
/// samples[i] the state after step i.
struct ChainRecord {
  Algorithm algorithm = Algorithm::Reference;
  std::uint64_t seed = 0;
  int dim = 0;
  std::vector<Vector> samples;
  std::vector<StepRecord> steps;
  AdaptationState adaptation;
  int final_basis_dim = 0;

  std::size_t step_count() const { return steps.size(); }
  std::uint64_t total_full_evals() const;
  std::uint64_t total_reduced_evals() const;
  double eval_wall_seconds() const;
  double average_stage2_prob(std::size_t burn_in = 0) const;

  /// Post-burn-in samples as rows.
  Matrix samples_matrix(std::size_t burn_in = 0) const;

  /// CSV with columns step, x_1..x_Np, stage1_accept, stage2_prob,
  /// stage2_accept, indicator_inf_norm, eval_kind, enriched, wall_time_ns.
  void save_csv(const std::filesystem::path& path) const;

  void save_binary(const std::filesystem::path& path) const;
  static ChainRecord load_binary(const std::filesystem::path& path);
};

/// Append-only binary writer used while a chain runs; the layout is
/// documented in docs/formats.md and matches ChainRecord::save_binary.
class ChainLogWriter {
 public:
  ChainLogWriter() = default;
  void open(const std::filesystem::path& path, const ChainRecord& record);
  /// Reopens an existing log for appending after a resume.
  void reopen(const std::filesystem::path& path);
  void append(const Vector& sample, const StepRecord& step);
  bool is_open() const { return stream_.is_open(); }
  void flush();

 private:
  std::ofstream stream_;
};

}  // namespace darom
