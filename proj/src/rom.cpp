#include "darom/rom.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <chrono>
#include <cmath>

#include "darom/errors.hpp"

namespace darom {

namespace {

constexpr double kConstraintDropTol = 1e-8;

/// Factorization of the reduced operator, either the plain symmetric block
/// or the saddle augmentation with the projected constraint row.
struct ReducedFactor {
  bool constrained = false;
  Eigen::LDLT<Matrix> plain;
  Eigen::FullPivLU<Matrix> saddle;
  int m = 0;

  // rhs has size m; returns (solution head, multiplier).
  std::pair<Vector, double> solve(const Vector& rhs) const {
    if (!constrained) {
      return {plain.solve(rhs), 0.0};
    }
    Vector ext = Vector::Zero(m + 1);
    ext.head(m) = rhs;
    Vector sol = saddle.solve(ext);
    return {sol.head(m), sol[m]};
  }
};

ReducedFactor factor_reduced(const ReducedSystem& system) {
  ReducedFactor factor;
  factor.m = static_cast<int>(system.load.size());
  const double cm_norm =
      system.constraint.size() ? system.constraint.cwiseAbs().maxCoeff() : 0.0;
  factor.constrained =
      cm_norm > kConstraintDropTol * system.constraint_scale;
  if (factor.constrained) {
    Matrix saddle = Matrix::Zero(factor.m + 1, factor.m + 1);
    saddle.topLeftCorner(factor.m, factor.m) = system.stiffness;
    saddle.topRightCorner(factor.m, 1) = system.constraint;
    saddle.bottomLeftCorner(1, factor.m) = system.constraint.transpose();
    factor.saddle.compute(saddle);
    if (!factor.saddle.isInvertible()) {
      throw NumericalError("reduced solve: singular saddle system");
    }
  } else {
    factor.plain.compute(system.stiffness);
    if (factor.plain.info() != Eigen::Success ||
        !(factor.plain.vectorD().minCoeff() > 0.0)) {
      throw NumericalError("reduced solve: projected stiffness not positive definite");
    }
  }
  return factor;
}

}  // namespace

ReducedSystem project(const ReducedBasis& basis, const AssembledSystem& system) {
  if (basis.empty()) throw DomainError("project: basis is empty");
  const auto v = basis.columns();
  ReducedSystem out;
  const Matrix av = system.stiffness * v;
  out.stiffness.noalias() = v.transpose() * av;
  out.load.noalias() = v.transpose() * system.load;
  out.constraint.noalias() = v.transpose() * system.constraint;
  out.constraint_scale = system.constraint.cwiseAbs().maxCoeff();
  out.generation = basis.generation();
  return out;
}

ReducedSolve solve_reduced_system(const ReducedSystem& system) {
  const ReducedFactor factor = factor_reduced(system);
  auto [state, multiplier] = factor.solve(-system.load);
  ReducedSolve out;
  out.reduced_state = std::move(state);
  out.multiplier = multiplier;
  out.constrained = factor.constrained;
  if (!out.reduced_state.allFinite()) {
    throw NumericalError("reduced solve: non-finite solution");
  }
  return out;
}

RomEvaluator::RomEvaluator(const ForwardModel& model, const ReducedBasis& basis,
                           const NoiseModel& noise)
    : model_(&model), basis_(&basis), noise_(&noise) {
  stiffness_storage_ = model.assembler().pattern();
}

void RomEvaluator::refresh_generation_cache() {
  if (cached_generation_ == basis_->generation()) return;
  const auto v = basis_->columns();
  observed_basis_ = model_->observation().weights * v;
  reduced_load_.noalias() = v.transpose() * model_->assembler().load();
  reduced_constraint_.noalias() = v.transpose() * model_->assembler().constraint();
  stiffness_times_basis_.resize(v.rows(), v.cols());
  cached_generation_ = basis_->generation();
}

RomSolveResult RomEvaluator::solve(const Vector& x) {
  if (basis_->empty()) throw DomainError("reduced solve: basis is empty");
  const auto start = std::chrono::steady_clock::now();
  refresh_generation_cache();

  const Vector field = model_->map().nodal_field(x);
  model_->assembler().assemble_into(field, stiffness_storage_);

  const auto v = basis_->columns();
  const int m = basis_->dim();
  stiffness_times_basis_.noalias() = stiffness_storage_ * v;

  ReducedSystem reduced;
  reduced.stiffness.noalias() = v.transpose() * stiffness_times_basis_;
  reduced.load = reduced_load_;
  reduced.constraint = reduced_constraint_;
  reduced.constraint_scale =
      model_->assembler().constraint().cwiseAbs().maxCoeff();
  reduced.generation = basis_->generation();

  auto factor = std::make_shared<ReducedFactor>(factor_reduced(reduced));
  auto [state, multiplier] = factor->solve(-reduced.load);
  if (!state.allFinite()) {
    throw NumericalError("reduced solve: non-finite solution");
  }

  RomSolveResult result;
  result.reduced_state = std::move(state);
  result.outputs.noalias() = observed_basis_ * result.reduced_state;
  result.multiplier = multiplier;
  result.generation = basis_->generation();

  auto residual = std::make_shared<Vector>(
      -(stiffness_times_basis_ * result.reduced_state + model_->assembler().load()));
  auto vt_residual = std::make_shared<Vector>(v.transpose() * *residual);
  result.full_residual = std::move(residual);
  result.vt_residual_ = std::move(vt_residual);
  result.factor_ = std::shared_ptr<const void>(factor);
  (void)m;

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

ErrorVector RomEvaluator::error_indicator(const RomSolveResult& solution) {
  if (solution.generation != basis_->generation()) {
    throw DomainError("error indicator: solution from a stale basis generation");
  }
  refresh_generation_cache();
  const auto* factor = static_cast<const ReducedFactor*>(solution.factor_.get());
  const int nd = model_->output_dim();
  const Vector& vtr = *solution.vt_residual_;

  ErrorVector out;
  out.kind = ErrorVector::Kind::Indicated;
  out.values.resize(nd);
  for (int j = 0; j < nd; ++j) {
    // Reduced dual problem for output j; the operator is symmetric, so the
    // primal factorization is reused.
    auto [w, nu] = factor->solve(observed_basis_.row(j).transpose());
    (void)nu;
    out.values[j] = w.dot(vtr) / noise_->std_devs()[j];
  }
  return out;
}

ErrorVector RomEvaluator::true_scaled_error_with_outputs(
    const Vector& full_outputs, const RomSolveResult& reduced) {
  ErrorVector out;
  out.kind = ErrorVector::Kind::True;
  out.values = noise_->whiten(full_outputs - reduced.outputs);
  return out;
}

ErrorVector RomEvaluator::true_scaled_error(const Vector& x) {
  const ForwardSolve full = model_->solve(x);
  const RomSolveResult reduced = solve(x);
  return true_scaled_error_with_outputs(full.outputs, reduced);
}

RomSolveResult solve_reduced(RomEvaluator& rom, const Vector& x) {
  return rom.solve(x);
}

ErrorVector true_scaled_error(const ForwardModel& model, const Vector& x,
                              RomEvaluator& rom) {
  (void)model;
  return rom.true_scaled_error(x);
}

}  // namespace darom
