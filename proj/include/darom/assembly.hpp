#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <memory>
#include <vector>

#include "darom/mesh.hpp"

namespace darom {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discretized operator for the Darcy problem with the zero-flux Neumann
/// boundary and the zero boundary-mean constraint.
///
/// The state solves  A u + q = 0  subject to  c^T u = 0, where A is the
/// (symmetric positive semidefinite) stiffness of grad(k grad u), q is minus
/// the integrated plume source, and c holds the boundary-edge lumped weights
/// of the line integral over the boundary. The nonlinear term of the general
/// steady-state form is identically zero for this model and is not stored.
struct AssembledSystem {
  SparseMatrix stiffness;  // n x n, exactly symmetric
  Vector load;             // q in "A u + q = 0" (= -source_term)
  Vector constraint;       // c, boundary lumped weights, zero at interior nodes
};

/// Fast repeated assembly on a fixed mesh.
///
/// The sparsity pattern and the per-Gauss-point reference matrices are
/// precomputed once; assemble() only refills values. Filling accumulates the
/// same addends in the same order for (i,j) and (j,i), so the stiffness is
/// bitwise symmetric, and assembly is bitwise deterministic in its inputs.
class StiffnessAssembler {
 public:
  explicit StiffnessAssembler(const Mesh& mesh);

  /// Assembles stiffness from strictly positive nodal permeability values.
  AssembledSystem assemble(const Vector& nodal_permeability) const;

  /// Value refill into a matrix copied from pattern(); avoids reallocations.
  void assemble_into(const Vector& nodal_permeability, SparseMatrix& out) const;

  const SparseMatrix& pattern() const { return pattern_; }
  const Vector& load() const { return load_; }
  const Vector& constraint() const { return constraint_; }
  const Mesh& mesh() const { return *mesh_; }

 private:
  const Mesh* mesh_;
  SparseMatrix pattern_;                       // compressed, zero values
  std::vector<std::array<int, 16>> slots_;     // element -> value-array slots
  std::array<std::array<double, 16>, 4> ref_;  // per-gauss 4x4 reference blocks
  Vector load_;
  Vector constraint_;
};

struct FullSolve {
  Vector state;       // u with c^T u = 0
  double multiplier;  // Lagrange multiplier of the boundary-mean constraint
  double residual;    // ||A u + q + c*lambda|| / ||q||
};

/// Solves the constrained system by sparse LU of the saddle augmentation
/// [A c; c^T 0]. Throws NumericalError if the factorization fails or the
/// relative residual exceeds rtol.
FullSolve solve_full(const AssembledSystem& system, double rtol = 1e-10);

/// Repeated-solve path for the Darcy operator on a fixed mesh.
///
/// The saddle solution is obtained from one SPD factorization: with
/// K = A + c c^T, solving K w = -q gives the multiplier lambda = c^T w and
/// the state u = w - (c^T w / c^T 1) 1, which satisfies the constrained
/// system exactly. K's sparsity and the Cholesky symbolic analysis are
/// cached; a small slot pool keeps concurrent solves safe.
class DarcySolver {
 public:
  explicit DarcySolver(const StiffnessAssembler& assembler, double rtol = 1e-10);
  ~DarcySolver();
  DarcySolver(const DarcySolver&) = delete;
  DarcySolver& operator=(const DarcySolver&) = delete;

  FullSolve solve(const Vector& nodal_permeability) const;

 private:
  struct Pool;
  const StiffnessAssembler* assembler_;
  double rtol_;
  SparseMatrix base_;            // pattern(A) + c c^T values, A part zero
  std::vector<int> slot_map_;    // A value slot -> base_ value slot
  std::unique_ptr<Pool> pool_;
};

}  // namespace darom
