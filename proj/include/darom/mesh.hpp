#pragma once

#include <Eigen/Dense>
#include <vector>

namespace darom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Uniform quadrilateral mesh of the unit square with bilinear elements.
///
/// Nodes are ordered row-major: node (i, j) lives at (i/nx, j/ny) and has
/// global index j*(nx+1) + i. Each element lists its four corner nodes
/// counter-clockwise starting at the lower-left corner.
struct Mesh {
  int nx = 0;
  int ny = 0;
  Eigen::Matrix<double, Eigen::Dynamic, 2> nodes;
  Eigen::Matrix<int, Eigen::Dynamic, 4> elements;
  std::vector<int> boundary_nodes;  // nodes with a coordinate in {0, 1}

  int node_count() const { return static_cast<int>(nodes.rows()); }
  int element_count() const { return static_cast<int>(elements.rows()); }
  double hx() const { return 1.0 / nx; }
  double hy() const { return 1.0 / ny; }
  int node_index(int i, int j) const { return j * (nx + 1) + i; }
};

/// Builds the uniform mesh; rejects nx or ny < 2.
Mesh build_mesh(int nx, int ny);

/// Source density at a point: four Gaussian plumes (std 0.05) centered at
/// (0.3,0.3), (0.7,0.3), (0.7,0.7), (0.3,0.7) with weights {2,-3,-2,3}.
double source_density(double x, double y);

/// Nodal load vector of the plume source integrated against the bilinear
/// FE basis (2x2 Gauss quadrature per element). The plume weights sum to
/// zero, so the load is compatible with the pure-Neumann operator.
Vector source_term(const Mesh& mesh);

}  // namespace darom
