#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "darom/assembly.hpp"
#include "darom/errors.hpp"
#include "darom/mesh.hpp"
#include "doctest.h"

using namespace darom;

TEST_SUITE_BEGIN("assembly");

namespace {

Vector random_positive_field(const Mesh& mesh, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.5, 3.0);
  Vector k(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) k[i] = unif(rng);
  return k;
}

}  // namespace

TEST_CASE("constant-permeability operator annihilates constants") {
  const Mesh mesh = build_mesh(8, 8);
  const StiffnessAssembler assembler(mesh);
  const AssembledSystem sys = assembler.assemble(Vector::Ones(mesh.node_count()));
  const Vector ones = Vector::Ones(mesh.node_count());
  CHECK((sys.stiffness * ones).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("stiffness is bitwise symmetric") {
  const Mesh mesh = build_mesh(9, 7);
  const StiffnessAssembler assembler(mesh);
  const AssembledSystem sys = assembler.assemble(random_positive_field(mesh, 3));
  const SparseMatrix diff = SparseMatrix(sys.stiffness.transpose()) - sys.stiffness;
  double max_abs = 0.0;
  for (int c = 0; c < diff.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(diff, c); it; ++it) {
      max_abs = std::max(max_abs, std::abs(it.value()));
    }
  }
  CHECK(max_abs == 0.0);
}

TEST_CASE("assembly is exactly linear in the permeability") {
  const Mesh mesh = build_mesh(6, 6);
  const StiffnessAssembler assembler(mesh);
  const Vector k = random_positive_field(mesh, 7);
  const AssembledSystem one = assembler.assemble(k);
  const AssembledSystem two = assembler.assemble(2.0 * k);
  for (int c = 0; c < one.stiffness.outerSize(); ++c) {
    SparseMatrix::InnerIterator a(one.stiffness, c);
    SparseMatrix::InnerIterator b(two.stiffness, c);
    for (; a; ++a, ++b) {
      CHECK(b.value() == 2.0 * a.value());  // exact: scaling by a power of two
    }
  }

  // General positive scaling up to rounding.
  const AssembledSystem scaled = assembler.assemble(1.7 * k);
  for (int c = 0; c < one.stiffness.outerSize(); ++c) {
    SparseMatrix::InnerIterator a(one.stiffness, c);
    SparseMatrix::InnerIterator s(scaled.stiffness, c);
    for (; a; ++a, ++s) {
      CHECK(s.value() == doctest::Approx(1.7 * a.value()).epsilon(1e-14));
    }
  }
}

TEST_CASE("assembly is deterministic down to the bit") {
  const Mesh mesh = build_mesh(10, 5);
  const StiffnessAssembler assembler(mesh);
  const Vector k = random_positive_field(mesh, 11);
  const AssembledSystem first = assembler.assemble(k);
  const AssembledSystem second = assembler.assemble(k);
  REQUIRE(first.stiffness.nonZeros() == second.stiffness.nonZeros());
  for (Eigen::Index i = 0; i < first.stiffness.nonZeros(); ++i) {
    CHECK(first.stiffness.valuePtr()[i] == second.stiffness.valuePtr()[i]);
  }
}

TEST_CASE("rejects nonpositive permeability") {
  const Mesh mesh = build_mesh(4, 4);
  const StiffnessAssembler assembler(mesh);
  Vector k = Vector::Ones(mesh.node_count());
  k[3] = 0.0;
  CHECK_THROWS_AS(assembler.assemble(k), DomainError);
}

TEST_CASE("constraint vector holds boundary edge weights summing to the perimeter") {
  const Mesh mesh = build_mesh(12, 8);
  const StiffnessAssembler assembler(mesh);
  const Vector& c = assembler.constraint();
  CHECK(c.sum() == doctest::Approx(4.0).epsilon(1e-14));
  for (int g = 0; g < mesh.node_count(); ++g) {
    const double x = mesh.nodes(g, 0);
    const double y = mesh.nodes(g, 1);
    const bool interior = x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0;
    if (interior) CHECK(c[g] == 0.0);
  }
}

TEST_CASE("positive semidefinite with a one-dimensional nullspace") {
  const Mesh mesh = build_mesh(5, 5);
  const StiffnessAssembler assembler(mesh);
  const AssembledSystem sys = assembler.assemble(random_positive_field(mesh, 13));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix(sys.stiffness));
  const Vector lam = eig.eigenvalues();
  CHECK(std::abs(lam[0]) <= 1e-12 * lam[lam.size() - 1]);
  CHECK(lam[1] > 1e-8 * lam[lam.size() - 1]);
}

TEST_CASE("constrained solve meets the residual and constraint tolerances") {
  const Mesh mesh = build_mesh(20, 20);
  const StiffnessAssembler assembler(mesh);

  SUBCASE("zero load gives the zero state") {
    AssembledSystem sys = assembler.assemble(Vector::Ones(mesh.node_count()));
    sys.load.setZero();
    const FullSolve solve = solve_full(sys);
    CHECK(solve.state.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("plume source, unit permeability") {
    const AssembledSystem sys = assembler.assemble(Vector::Ones(mesh.node_count()));
    const FullSolve solve = solve_full(sys);
    CHECK(solve.residual <= 1e-10);
    CHECK(std::abs(sys.constraint.dot(solve.state)) <= 1e-9 * solve.state.norm());
  }

  SUBCASE("two solves at the same field are bitwise identical") {
    const AssembledSystem sys = assembler.assemble(random_positive_field(mesh, 17));
    const FullSolve a = solve_full(sys);
    const FullSolve b = solve_full(sys);
    for (int i = 0; i < mesh.node_count(); ++i) CHECK(a.state[i] == b.state[i]);
  }
}

TEST_SUITE_END();
