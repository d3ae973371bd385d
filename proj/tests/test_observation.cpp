#include "darom/errors.hpp"
#include "darom/observation.hpp"
#include "doctest.h"

using namespace darom;

TEST_SUITE_BEGIN("observation");

TEST_CASE("default layout is the 9x9 interior grid") {
  const Mesh mesh = build_mesh(20, 20);
  const ObservationOperator op = ObservationOperator::interior_grid(mesh);
  CHECK(op.output_dim() == 81);
  CHECK(op.sensor_coords(0, 0) == doctest::Approx(0.1));
  CHECK(op.sensor_coords(80, 1) == doctest::Approx(0.9));
}

TEST_CASE("rows are convex combinations") {
  const Mesh mesh = build_mesh(13, 9);
  const ObservationOperator op = ObservationOperator::interior_grid(mesh);
  for (Eigen::Index i = 0; i < op.weights.nonZeros(); ++i) {
    CHECK(op.weights.valuePtr()[i] >= 0.0);
  }
  const Vector row_sums = op.weights * Vector::Ones(mesh.node_count());
  for (int s = 0; s < op.output_dim(); ++s) {
    CHECK(row_sums[s] == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("constant states read the constant at every sensor") {
  const Mesh mesh = build_mesh(11, 17);
  const ObservationOperator op = ObservationOperator::interior_grid(mesh);
  const Vector u = Vector::Constant(mesh.node_count(), 3.25);
  const Vector d = op.observe(u);
  for (int s = 0; s < d.size(); ++s) CHECK(d[s] == doctest::Approx(3.25).epsilon(1e-14));
}

TEST_CASE("a sensor on a mesh node reads that nodal value exactly") {
  const Mesh mesh = build_mesh(4, 4);
  Eigen::Matrix<double, Eigen::Dynamic, 2> coords(1, 2);
  coords << 0.25, 0.5;  // exactly node (1, 2) on the 4x4 mesh
  const ObservationOperator op = ObservationOperator::at_points(mesh, coords);
  Vector u = Vector::Zero(mesh.node_count());
  u[mesh.node_index(1, 2)] = 7.5;
  CHECK(op.observe(u)[0] == 7.5);
}

TEST_CASE("rejects sensors outside the domain") {
  const Mesh mesh = build_mesh(4, 4);
  Eigen::Matrix<double, Eigen::Dynamic, 2> coords(1, 2);
  coords << 1.5, 0.5;
  CHECK_THROWS_AS(ObservationOperator::at_points(mesh, coords), DomainError);
}

TEST_SUITE_END();
