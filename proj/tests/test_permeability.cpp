#include <cmath>

#include "darom/errors.hpp"
#include "darom/permeability.hpp"
#include "doctest.h"

using namespace darom;

TEST_SUITE_BEGIN("permeability");

TEST_CASE("bump map with unit weights peaks near the domain center") {
  const Mesh mesh = build_mesh(40, 40);
  const PermeabilityMap map = PermeabilityMap::rbf_default(mesh);
  CHECK(map.parameter_dim() == 9);
  const Vector k = map.nodal_field(Vector::Ones(9));
  Eigen::Index argmax = 0;
  k.maxCoeff(&argmax);
  CHECK(mesh.nodes(argmax, 0) == doctest::Approx(0.5));
  CHECK(mesh.nodes(argmax, 1) == doctest::Approx(0.5));
}

TEST_CASE("one-hot weight reproduces a single bump") {
  const Mesh mesh = build_mesh(40, 40);
  const PermeabilityMap map = PermeabilityMap::rbf_default(mesh);
  Vector x = Vector::Zero(9);
  x[0] = 1.0;  // center (0.2, 0.2)
  const Vector k = map.nodal_field(x);
  const int at_center = mesh.node_index(8, 8);  // (0.2, 0.2) on the 40x40 mesh
  CHECK(k[at_center] == doctest::Approx(1.0).epsilon(1e-12));
  const int probe = mesh.node_index(16, 8);  // (0.4, 0.2): distance 0.2
  CHECK(k[probe] ==
        doctest::Approx(std::exp(-0.5 * std::pow(0.2 / 0.15, 2))).epsilon(1e-12));
}

TEST_CASE("nonpositive bump fields are rejected") {
  const Mesh mesh = build_mesh(10, 10);
  const PermeabilityMap map = PermeabilityMap::rbf_default(mesh);
  Vector x = Vector::Ones(9);
  x[4] = -50.0;  // drives the field negative near the center
  CHECK_THROWS_AS(map.nodal_field(x), DomainError);
}

TEST_CASE("zero KL weights give the unit field") {
  const Mesh mesh = build_mesh(12, 12);
  const PermeabilityMap map = PermeabilityMap::kl_expansion(mesh, 0.25, 0.9999);
  const Vector k = map.nodal_field(Vector::Zero(map.parameter_dim()));
  CHECK((k.array() - 1.0).abs().maxCoeff() == 0.0);
}

TEST_CASE("retained mode count matches the reference grid") {
  const Mesh paper = build_mesh(120, 120);
  const PermeabilityMap map = PermeabilityMap::kl_expansion(paper, 0.25, 0.9999);
  CHECK(map.parameter_dim() == 43);
}

TEST_CASE("desk-scale mode count is stable across constructions") {
  const Mesh mesh = build_mesh(60, 60);
  const PermeabilityMap a = PermeabilityMap::kl_expansion(mesh, 0.25, 0.9999);
  const PermeabilityMap b = PermeabilityMap::kl_expansion(mesh, 0.25, 0.9999);
  CHECK(a.parameter_dim() == b.parameter_dim());
  CHECK(a.parameter_dim() >= 20);
  CHECK(a.parameter_dim() <= 80);
}

TEST_CASE("energy 1.0 retains every mode") {
  const Mesh mesh = build_mesh(5, 5);
  const PermeabilityMap map = PermeabilityMap::kl_expansion(mesh, 0.3, 1.0);
  CHECK(map.parameter_dim() == 36);
}

TEST_CASE("retained eigenvalues are sorted and capture the energy fraction") {
  const Mesh mesh = build_mesh(16, 16);
  const double energy = 0.9999;
  const PermeabilityMap map = PermeabilityMap::kl_expansion(mesh, 0.25, energy);
  const Vector& lam = map.kl_eigenvalues();
  for (int i = 1; i < lam.size(); ++i) CHECK(lam[i] <= lam[i - 1]);
  CHECK(lam.sum() >= energy * map.kl_total_energy());
  // Dropping the last mode must fall below the criterion (minimality).
  CHECK(lam.head(lam.size() - 1).sum() < energy * map.kl_total_energy());
}

TEST_CASE("modes are orthonormal in the grid inner product") {
  const Mesh mesh = build_mesh(14, 10);
  const PermeabilityMap map = PermeabilityMap::kl_expansion(mesh, 0.25, 0.999);
  const Matrix& modes = map.kl_modes();
  const Matrix gram = modes.transpose() * modes;
  CHECK((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <=
        1e-10);
}

TEST_CASE("mesh mismatch is rejected") {
  const Mesh mesh = build_mesh(10, 10);
  const Mesh other = build_mesh(12, 12);
  const PermeabilityMap map = PermeabilityMap::rbf_default(mesh);
  CHECK_THROWS_AS(permeability_field(map, Vector::Ones(9), other), DomainError);
  CHECK(permeability_field(map, Vector::Ones(9), mesh).size() == mesh.node_count());
}

TEST_SUITE_END();
