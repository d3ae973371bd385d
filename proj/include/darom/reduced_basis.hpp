#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "darom/mesh.hpp"

namespace darom {

/// A parameter at which a snapshot entered the basis, with bookkeeping used
/// by the studies and the checkpoint file.
struct SnapshotInfo {
  Vector parameter;
  std::uint64_t chain_step = 0;
  bool accepted = true;
  std::string source;  // e.g. "initial", "stage2", "pod"
};

/// Orthonormal snapshot basis with incremental Gram-Schmidt enrichment.
///
/// Columns stay orthonormal to 1e-10; enrichment runs modified Gram-Schmidt
/// with one re-orthogonalization pass and rejects vectors whose remainder
/// falls below 1e-10 of their norm. The generation counter increases by one
/// per accepted column, letting dependents cache projected quantities.
class ReducedBasis {
 public:
  ReducedBasis(int full_dim, int max_dim);

  enum class EnrichOutcome { Added, Dependent, AtCapacity };

  EnrichOutcome enrich(const Vector& snapshot_state, SnapshotInfo info);

  int dim() const { return m_; }
  int full_dim() const { return static_cast<int>(columns_.rows()); }
  int max_dim() const { return max_dim_; }
  bool at_capacity() const { return m_ >= max_dim_; }
  std::uint64_t generation() const { return generation_; }
  bool empty() const { return m_ == 0; }

  /// View of the active columns (full_dim x dim).
  Eigen::Ref<const Matrix> columns() const { return columns_.leftCols(m_); }
  const std::vector<SnapshotInfo>& snapshots() const { return snapshots_; }

  /// Prefix basis holding the first m columns (enrichment order preserved).
  ReducedBasis truncated(int m) const;

  /// Orthonormal columns supplied directly (tests, POD construction path).
  static ReducedBasis from_columns(const Matrix& columns, int max_dim);

  /// Binary checkpoint; layout documented in docs/formats.md.
  void save(const std::filesystem::path& path) const;
  static ReducedBasis load(const std::filesystem::path& path);

 private:
  Matrix columns_;  // full_dim x max_dim, first m_ columns active
  int m_ = 0;
  int max_dim_ = 0;
  std::uint64_t generation_ = 0;
  std::vector<SnapshotInfo> snapshots_;

  static constexpr double kDependenceTol = 1e-10;
};

}  // namespace darom
