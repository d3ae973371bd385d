#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>

#include "darom/forward_model.hpp"
#include "darom/noise.hpp"
#include "darom/reduced_basis.hpp"

namespace darom {

/// Galerkin projection of an assembled system onto the reduced basis,
/// with the boundary-mean constraint projected alongside.
struct ReducedSystem {
  Matrix stiffness;        // A_m = V^T A V (symmetric)
  Vector load;             // q_m = V^T q
  Vector constraint;       // c_m = V^T c
  double constraint_scale; // |c|_inf of the full constraint vector
  std::uint64_t generation = 0;
};

ReducedSystem project(const ReducedBasis& basis, const AssembledSystem& system);

struct ReducedSolve {
  Vector reduced_state;  // u_m
  double multiplier;
  bool constrained;  // whether the projected constraint row was retained
};

/// Solves A_m u_m + q_m = 0 with c_m^T u_m = 0.
///
/// Snapshot-built bases inherit the constraint, leaving c_m at rounding
/// level; in that case (|c_m|_inf <= 1e-8 |c|_inf) the constraint row is
/// dropped and the symmetric system is solved directly. Otherwise the dense
/// saddle augmentation is factorized with full pivoting.
ReducedSolve solve_reduced_system(const ReducedSystem& system);

/// Scaled output error of the reduced model, true or indicated.
struct ErrorVector {
  enum class Kind { True, Indicated };
  Vector values;  // length N_d, noise-whitened output discrepancies
  Kind kind;
  double inf_norm() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

class RomEvaluator;

struct RomSolveResult {
  Vector reduced_state;
  Vector outputs;  // d_m = C V u_m
  double multiplier;
  std::uint64_t generation = 0;
  double wall_seconds = 0.0;
  /// r = -(A(x) V u_m + q); kept for the dual-weighted-residual indicator.
  std::shared_ptr<const Vector> full_residual;

 private:
  friend class RomEvaluator;
  std::shared_ptr<const void> factor_;  // reduced factorization handle
  std::shared_ptr<const Vector> vt_residual_;  // V^T r
};

/// Reduced-order forward map F_m(x) over one basis, with per-generation
/// caches (C V, V^T q, V^T c). Owned by a single chain; rebuild projected
/// operators per parameter since A(x) has no affine decomposition here.
class RomEvaluator {
 public:
  RomEvaluator(const ForwardModel& model, const ReducedBasis& basis,
               const NoiseModel& noise);

  /// Reduced Galerkin solve at x. Throws NumericalError when the reduced
  /// system is singular (possible for a poorly conditioned basis).
  RomSolveResult solve(const Vector& x);

  /// Dual-weighted-residual error indicator: per output j, solve the reduced
  /// dual problem for w_j and pair V w_j with the retained full residual,
  /// scaled by the noise whitening. No full solve is performed.
  ErrorVector error_indicator(const RomSolveResult& solution);

  /// True scaled error at x: whiten(F(x) - F_m(x)); runs one full solve.
  ErrorVector true_scaled_error(const Vector& x);
  /// Same with the full-model outputs already known.
  ErrorVector true_scaled_error_with_outputs(const Vector& full_outputs,
                                             const RomSolveResult& reduced);

  const ReducedBasis& basis() const { return *basis_; }
  const ForwardModel& model() const { return *model_; }
  const NoiseModel& noise() const { return *noise_; }

 private:
  void refresh_generation_cache();

  const ForwardModel* model_;
  const ReducedBasis* basis_;
  const NoiseModel* noise_;

  // Per-generation caches.
  std::uint64_t cached_generation_ = ~0ull;
  Matrix observed_basis_;    // C V, N_d x m
  Vector reduced_load_;      // V^T q
  Vector reduced_constraint_;  // V^T c

  // Per-call workspace reused across solves.
  SparseMatrix stiffness_storage_;
  Matrix stiffness_times_basis_;  // A V
};

/// Free-function forms of the module operations.
RomSolveResult solve_reduced(RomEvaluator& rom, const Vector& x);
ErrorVector true_scaled_error(const ForwardModel& model, const Vector& x,
                              RomEvaluator& rom);

}  // namespace darom
