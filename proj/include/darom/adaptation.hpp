#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace darom {

/// Thresholds governing online basis refinement and its termination.
struct AdaptationConfig {
  double epsilon = 1e-1;      // scaled-error threshold
  double epsilon0 = 1.0;      // upper threshold of the eps-approximate scheme
  int subchain_length = 50;   // L
  int max_basis_dim = 200;    // M
  double criterion_c = 0.1;   // c of the finite adaptation criterion

  /// N_max = 1/(c eps): adaptation stops once the average number of chain
  /// steps per enrichment exceeds this.
  double n_max() const { return 1.0 / (criterion_c * epsilon); }

  void validate() const;
};

struct AdaptationState {
  std::uint64_t enrichment_count = 0;
  std::uint64_t step_count = 0;  // outer chain steps while adapting counts all steps so far
  bool stopped = false;
  std::string stop_reason;
  std::vector<std::uint64_t> enrichment_steps;  // step index of each enrichment

  void record_enrichment(std::uint64_t step) {
    ++enrichment_count;
    enrichment_steps.push_back(step);
  }
};

/// True once the average number of chain steps per enrichment exceeds
/// N_max; never true before the first enrichment.
bool finite_adaptation_check(const AdaptationState& state,
                             const AdaptationConfig& config);

}  // namespace darom
