#include <cmath>
#include <set>

#include "darom/errors.hpp"
#include "darom/mesh.hpp"
#include "doctest.h"

using namespace darom;

TEST_SUITE_BEGIN("mesh");

TEST_CASE("node, element and boundary counts") {
  const Mesh small = build_mesh(2, 2);
  CHECK(small.node_count() == 9);
  CHECK(small.element_count() == 4);
  CHECK(small.boundary_nodes.size() == 8);

  const Mesh desk = build_mesh(60, 60);
  CHECK(desk.node_count() == 3721);
  CHECK(desk.boundary_nodes.size() == 240);  // 4*nx for a square mesh

  const Mesh paper = build_mesh(120, 120);
  CHECK(paper.node_count() == 14641);
}

TEST_CASE("rejects degenerate sizes") {
  CHECK_THROWS_AS(build_mesh(1, 4), DomainError);
  CHECK_THROWS_AS(build_mesh(4, 0), DomainError);
}

TEST_CASE("elements reference four distinct nodes") {
  const Mesh mesh = build_mesh(5, 3);
  for (int e = 0; e < mesh.element_count(); ++e) {
    std::set<int> nodes;
    for (int a = 0; a < 4; ++a) nodes.insert(mesh.elements(e, a));
    CHECK(nodes.size() == 4);
  }
}

TEST_CASE("boundary set is exactly the nodes with a coordinate in {0,1}") {
  const Mesh mesh = build_mesh(7, 4);
  std::set<int> boundary(mesh.boundary_nodes.begin(), mesh.boundary_nodes.end());
  for (int g = 0; g < mesh.node_count(); ++g) {
    const double x = mesh.nodes(g, 0);
    const double y = mesh.nodes(g, 1);
    const bool on_boundary = x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0;
    CHECK(boundary.count(g) == (on_boundary ? 1u : 0u));
  }
}

TEST_CASE("plume density peaks at weight/(2 pi sigma^2)") {
  const double peak = 2.0 / (2.0 * M_PI * 0.05 * 0.05);
  // Contributions from the other three plumes at 0.4+ distance are ~1e-14.
  CHECK(source_density(0.3, 0.3) == doctest::Approx(peak).epsilon(1e-9));
}

TEST_CASE("load vector of the zero-mean source sums to zero") {
  const Mesh mesh = build_mesh(60, 60);
  const Vector load = source_term(mesh);
  const double scale = load.cwiseAbs().maxCoeff();
  CHECK(std::abs(load.sum()) <= 1e-8 * scale);
}

TEST_SUITE_END();
