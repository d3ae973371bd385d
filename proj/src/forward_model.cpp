#include "darom/forward_model.hpp"

#include <chrono>

namespace darom {

ForwardModel::ForwardModel(Mesh mesh, PermeabilityMap map,
                           ObservationOperator obs, double solve_rtol)
    : mesh_(std::make_shared<Mesh>(std::move(mesh))),
      map_(std::move(map)),
      obs_(std::move(obs)),
      assembler_(std::make_shared<StiffnessAssembler>(*mesh_)),
      solver_(std::make_shared<DarcySolver>(*assembler_, solve_rtol)),
      rtol_(solve_rtol) {}

ForwardSolve ForwardModel::solve_with_field(const Vector& nodal_permeability) const {
  const auto start = std::chrono::steady_clock::now();
  const FullSolve full = solver_->solve(nodal_permeability);
  ForwardSolve out;
  out.state = full.state;
  out.outputs = obs_.observe(full.state);
  out.multiplier = full.multiplier;
  out.residual = full.residual;
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

ForwardSolve ForwardModel::solve(const Vector& x) const {
  return solve_with_field(map_.nodal_field(x));
}

}  // namespace darom
