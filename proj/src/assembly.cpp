#include "darom/assembly.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "darom/errors.hpp"

namespace darom {

namespace {

// Storage slot of (row, col) in a compressed column-major sparse matrix.
int find_slot(const SparseMatrix& m, int row, int col) {
  const int* outer = m.outerIndexPtr();
  const int* inner = m.innerIndexPtr();
  const int* begin = inner + outer[col];
  const int* end = inner + outer[col + 1];
  const int* it = std::lower_bound(begin, end, row);
  return static_cast<int>(it - inner);
}

}  // namespace

StiffnessAssembler::StiffnessAssembler(const Mesh& mesh) : mesh_(&mesh) {
  const int n = mesh.node_count();
  const double hx = mesh.hx();
  const double hy = mesh.hy();

  // Reference-element data at the 2x2 Gauss points: grad(phi_a).grad(phi_b)
  // times the Jacobian and unit quadrature weight. Identical for every
  // element of the uniform mesh.
  const double g = 1.0 / std::sqrt(3.0);
  const std::array<std::array<double, 2>, 4> gauss = {
      {{-g, -g}, {g, -g}, {g, g}, {-g, g}}};
  const double jac = 0.25 * hx * hy;
  for (int p = 0; p < 4; ++p) {
    const double xi = gauss[p][0];
    const double eta = gauss[p][1];
    // d(phi)/dx = d(phi)/dxi * 2/hx, likewise for y.
    const std::array<double, 4> dxi = {-0.25 * (1 - eta), 0.25 * (1 - eta),
                                       0.25 * (1 + eta), -0.25 * (1 + eta)};
    const std::array<double, 4> deta = {-0.25 * (1 - xi), -0.25 * (1 + xi),
                                        0.25 * (1 + xi), 0.25 * (1 - xi)};
    // The symmetric products dxi[a]*dxi[b] are formed first so mirror
    // entries round identically and the assembled matrix is bitwise
    // symmetric.
    const double factor_x = (2.0 / hx) * (2.0 / hx) * jac;
    const double factor_y = (2.0 / hy) * (2.0 / hy) * jac;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        ref_[p][a * 4 + b] =
            (dxi[a] * dxi[b]) * factor_x + (deta[a] * deta[b]) * factor_y;
      }
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.element_count()) * 16);
  for (int e = 0; e < mesh.element_count(); ++e) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        trips.emplace_back(mesh.elements(e, a), mesh.elements(e, b), 0.0);
      }
    }
  }
  pattern_.resize(n, n);
  pattern_.setFromTriplets(trips.begin(), trips.end());
  pattern_.makeCompressed();

  slots_.resize(mesh.element_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        slots_[e][a * 4 + b] =
            find_slot(pattern_, mesh.elements(e, a), mesh.elements(e, b));
      }
    }
  }

  load_ = -source_term(mesh);

  constraint_ = Vector::Zero(n);
  for (int i = 0; i < mesh.nx; ++i) {  // bottom and top edges
    for (int j : {0, mesh.ny}) {
      constraint_[mesh.node_index(i, j)] += 0.5 * hx;
      constraint_[mesh.node_index(i + 1, j)] += 0.5 * hx;
    }
  }
  for (int j = 0; j < mesh.ny; ++j) {  // left and right edges
    for (int i : {0, mesh.nx}) {
      constraint_[mesh.node_index(i, j)] += 0.5 * hy;
      constraint_[mesh.node_index(i, j + 1)] += 0.5 * hy;
    }
  }
}

void StiffnessAssembler::assemble_into(const Vector& nodal_permeability,
                                       SparseMatrix& out) const {
  const Mesh& mesh = *mesh_;
  if (nodal_permeability.size() != mesh.node_count()) {
    throw DomainError("assemble: permeability size does not match mesh");
  }
  if (nodal_permeability.minCoeff() <= 0.0) {
    throw DomainError("assemble: permeability must be strictly positive");
  }
  double* values = out.valuePtr();
  std::fill(values, values + out.nonZeros(), 0.0);

  // Bilinear interpolation of nodal k at the 2x2 Gauss points.
  const double g = 1.0 / std::sqrt(3.0);
  std::array<std::array<double, 4>, 4> shape;
  const std::array<std::array<double, 2>, 4> gauss = {
      {{-g, -g}, {g, -g}, {g, g}, {-g, g}}};
  for (int p = 0; p < 4; ++p) {
    const double xi = gauss[p][0];
    const double eta = gauss[p][1];
    shape[p] = {0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta),
                0.25 * (1 + xi) * (1 + eta), 0.25 * (1 - xi) * (1 + eta)};
  }

  for (int e = 0; e < mesh.element_count(); ++e) {
    std::array<double, 4> k_node;
    for (int a = 0; a < 4; ++a) k_node[a] = nodal_permeability[mesh.elements(e, a)];
    std::array<double, 4> k_gauss;
    for (int p = 0; p < 4; ++p) {
      k_gauss[p] = shape[p][0] * k_node[0] + shape[p][1] * k_node[1] +
                   shape[p][2] * k_node[2] + shape[p][3] * k_node[3];
    }
    const auto& slot = slots_[e];
    for (int ab = 0; ab < 16; ++ab) {
      double acc = 0.0;
      for (int p = 0; p < 4; ++p) acc += k_gauss[p] * ref_[p][ab];
      values[slot[ab]] += acc;
    }
  }
}

AssembledSystem StiffnessAssembler::assemble(const Vector& nodal_permeability) const {
  AssembledSystem sys;
  sys.stiffness = pattern_;
  assemble_into(nodal_permeability, sys.stiffness);
  sys.load = load_;
  sys.constraint = constraint_;
  return sys;
}

FullSolve solve_full(const AssembledSystem& system, double rtol) {
  const int n = static_cast<int>(system.load.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(system.stiffness.nonZeros() + 2 * n + 2);
  for (int col = 0; col < system.stiffness.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(system.stiffness, col); it; ++it) {
      trips.emplace_back(static_cast<int>(it.row()), col, it.value());
    }
  }
  for (int i = 0; i < n; ++i) {
    const double ci = system.constraint[i];
    if (ci != 0.0) {
      trips.emplace_back(i, n, ci);
      trips.emplace_back(n, i, ci);
    }
  }
  SparseMatrix augmented(n + 1, n + 1);
  augmented.setFromTriplets(trips.begin(), trips.end());
  augmented.makeCompressed();

  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(augmented);
  if (lu.info() != Eigen::Success) {
    throw NumericalError("solve_full: sparse LU factorization failed");
  }
  Vector rhs = Vector::Zero(n + 1);
  rhs.head(n) = -system.load;
  const Vector sol = lu.solve(rhs);

  FullSolve out;
  out.state = sol.head(n);
  out.multiplier = sol[n];
  const double qnorm = system.load.norm();
  const Vector res = system.stiffness * out.state + system.load +
                     system.constraint * out.multiplier;
  out.residual = qnorm > 0.0 ? res.norm() / qnorm : res.norm();
  if (!std::isfinite(out.residual) || (qnorm > 0.0 && out.residual > rtol)) {
    throw NumericalError("solve_full: residual exceeds tolerance", out.residual);
  }
  return out;
}

struct DarcySolver::Pool {
  struct Slot {
    std::mutex mutex;
    SparseMatrix stiffness;  // assembler pattern
    SparseMatrix spd;        // base pattern
    Eigen::SimplicialLDLT<SparseMatrix> ldlt;
    bool analyzed = false;
  };
  std::vector<std::unique_ptr<Slot>> slots;
};

DarcySolver::DarcySolver(const StiffnessAssembler& assembler, double rtol)
    : assembler_(&assembler), rtol_(rtol), pool_(std::make_unique<Pool>()) {
  const Vector& c = assembler.constraint();
  const SparseMatrix c_sparse = c.sparseView();
  const SparseMatrix rank_one = c_sparse * SparseMatrix(c_sparse.transpose());
  base_ = assembler.pattern() + rank_one;
  base_.makeCompressed();

  const SparseMatrix& pattern = assembler.pattern();
  slot_map_.resize(pattern.nonZeros());
  std::size_t idx = 0;
  for (int col = 0; col < pattern.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(pattern, col); it; ++it, ++idx) {
      slot_map_[idx] = find_slot(base_, static_cast<int>(it.row()), col);
    }
  }

  unsigned slots = std::max(1u, std::thread::hardware_concurrency());
  slots = std::min(slots, 8u);
  for (unsigned s = 0; s < slots; ++s) {
    auto slot = std::make_unique<Pool::Slot>();
    slot->stiffness = pattern;
    slot->spd = base_;
    pool_->slots.push_back(std::move(slot));
  }
}

DarcySolver::~DarcySolver() = default;

FullSolve DarcySolver::solve(const Vector& nodal_permeability) const {
  Pool::Slot* slot = nullptr;
  std::unique_lock<std::mutex> lock;
  for (auto& candidate : pool_->slots) {
    std::unique_lock<std::mutex> attempt(candidate->mutex, std::try_to_lock);
    if (attempt.owns_lock()) {
      slot = candidate.get();
      lock = std::move(attempt);
      break;
    }
  }
  if (!slot) {
    const auto hash = std::hash<std::thread::id>()(std::this_thread::get_id());
    slot = pool_->slots[hash % pool_->slots.size()].get();
    lock = std::unique_lock<std::mutex>(slot->mutex);
  }

  assembler_->assemble_into(nodal_permeability, slot->stiffness);
  std::copy(base_.valuePtr(), base_.valuePtr() + base_.nonZeros(),
            slot->spd.valuePtr());
  const double* a_values = slot->stiffness.valuePtr();
  double* k_values = slot->spd.valuePtr();
  for (std::size_t i = 0; i < slot_map_.size(); ++i) {
    k_values[slot_map_[i]] += a_values[i];
  }

  if (!slot->analyzed) {
    slot->ldlt.analyzePattern(slot->spd);
    slot->analyzed = true;
  }
  slot->ldlt.factorize(slot->spd);
  if (slot->ldlt.info() != Eigen::Success) {
    throw NumericalError("darcy solve: Cholesky factorization failed");
  }

  const Vector& load = assembler_->load();
  const Vector& c = assembler_->constraint();
  const Vector b = -load;
  Vector w = slot->ldlt.solve(b);

  const auto assemble_result = [&](const Vector& w_vec) {
    FullSolve out;
    out.multiplier = c.dot(w_vec);
    out.state = w_vec;
    out.state.array() -= out.multiplier / c.sum();
    const double qnorm = load.norm();
    const Vector res =
        slot->stiffness * out.state + load + c * out.multiplier;
    out.residual = qnorm > 0.0 ? res.norm() / qnorm : res.norm();
    return out;
  };

  FullSolve out = assemble_result(w);
  if (!std::isfinite(out.residual) || out.residual > 0.1 * rtol_) {
    // One step of iterative refinement recovers the digits lost to an
    // ill-conditioned permeability contrast.
    w += slot->ldlt.solve(b - slot->spd * w);
    out = assemble_result(w);
  }
  if (!std::isfinite(out.residual) || out.residual > rtol_) {
    throw NumericalError("darcy solve: residual exceeds tolerance", out.residual);
  }
  return out;
}

}  // namespace darom
