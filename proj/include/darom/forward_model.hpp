#pragma once

#include <memory>

#include "darom/assembly.hpp"
#include "darom/mesh.hpp"
#include "darom/observation.hpp"
#include "darom/permeability.hpp"

namespace darom {

struct ForwardSolve {
  Vector state;       // u
  Vector outputs;     // d = C u
  double multiplier;  // constraint multiplier
  double residual;
  double wall_seconds;  // assemble + factorize + solve + observe
};

/// The full-scale parameter-to-observable map F(x): assemble the stiffness
/// for the mapped permeability, solve the constrained system by a sparse
/// direct factorization, and read the sensors.
///
/// All methods are const and allocate per-call state; concurrent use from
/// independent chains is safe.
class ForwardModel {
 public:
  ForwardModel(Mesh mesh, PermeabilityMap map, ObservationOperator obs,
               double solve_rtol = 1e-10);

  ForwardSolve solve(const Vector& x) const;
  /// Same solve for an explicit nodal permeability (used for synthetic-truth
  /// fields that are not in the range of the parameter map).
  ForwardSolve solve_with_field(const Vector& nodal_permeability) const;

  const Mesh& mesh() const { return *mesh_; }
  const PermeabilityMap& map() const { return map_; }
  const ObservationOperator& observation() const { return obs_; }
  const StiffnessAssembler& assembler() const { return *assembler_; }
  int state_dim() const { return mesh_->node_count(); }
  int output_dim() const { return obs_.output_dim(); }
  int parameter_dim() const { return map_.parameter_dim(); }

 private:
  std::shared_ptr<const Mesh> mesh_;
  PermeabilityMap map_;
  ObservationOperator obs_;
  std::shared_ptr<const StiffnessAssembler> assembler_;
  std::shared_ptr<const DarcySolver> solver_;
  double rtol_;
};

}  // namespace darom
