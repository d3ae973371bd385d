#include "darom/observation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "darom/errors.hpp"

namespace darom {

Vector ObservationOperator::observe(const Vector& state) const {
  if (state.size() != weights.cols()) {
    throw DomainError("observe: state dimension does not match operator");
  }
  return weights * state;
}

ObservationOperator ObservationOperator::at_points(
    const Mesh& mesh, const Eigen::Matrix<double, Eigen::Dynamic, 2>& coords) {
  const int nd = static_cast<int>(coords.rows());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nd) * 4);
  for (int s = 0; s < nd; ++s) {
    const double x = coords(s, 0);
    const double y = coords(s, 1);
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) {
      throw DomainError("observation: sensor outside the unit square");
    }
    int ei = std::min(static_cast<int>(x * mesh.nx), mesh.nx - 1);
    int ej = std::min(static_cast<int>(y * mesh.ny), mesh.ny - 1);
    const double xi = x * mesh.nx - ei;    // local coords in [0, 1]
    const double eta = y * mesh.ny - ej;
    const std::array<double, 4> shape = {(1 - xi) * (1 - eta), xi * (1 - eta),
                                         xi * eta, (1 - xi) * eta};
    const std::array<int, 4> nodes = {
        mesh.node_index(ei, ej), mesh.node_index(ei + 1, ej),
        mesh.node_index(ei + 1, ej + 1), mesh.node_index(ei, ej + 1)};
    for (int a = 0; a < 4; ++a) {
      if (shape[a] != 0.0) trips.emplace_back(s, nodes[a], shape[a]);
    }
  }
  ObservationOperator op;
  op.sensor_coords = coords;
  op.weights.resize(nd, mesh.node_count());
  op.weights.setFromTriplets(trips.begin(), trips.end());
  op.weights.makeCompressed();
  return op;
}

ObservationOperator ObservationOperator::interior_grid(const Mesh& mesh,
                                                       double spacing) {
  if (spacing <= 0.0 || spacing >= 0.5) {
    throw DomainError("observation: interior grid spacing must be in (0, 0.5)");
  }
  const int per_axis = static_cast<int>(std::round(1.0 / spacing)) - 1;
  Eigen::Matrix<double, Eigen::Dynamic, 2> coords(per_axis * per_axis, 2);
  int s = 0;
  for (int j = 1; j <= per_axis; ++j) {
    for (int i = 1; i <= per_axis; ++i) {
      coords(s, 0) = i * spacing;
      coords(s, 1) = j * spacing;
      ++s;
    }
  }
  return at_points(mesh, coords);
}

}  // namespace darom
