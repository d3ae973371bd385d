#include "darom/mesh.hpp"

#include <array>
#include <cmath>

#include "darom/errors.hpp"

namespace darom {

Mesh build_mesh(int nx, int ny) {
  if (nx < 2 || ny < 2) {
    throw DomainError("build_mesh: nx and ny must be at least 2");
  }
  Mesh mesh;
  mesh.nx = nx;
  mesh.ny = ny;

  const int nnx = nx + 1;
  const int nny = ny + 1;
  mesh.nodes.resize(static_cast<Eigen::Index>(nnx) * nny, 2);
  for (int j = 0; j < nny; ++j) {
    for (int i = 0; i < nnx; ++i) {
      const int g = j * nnx + i;
      mesh.nodes(g, 0) = static_cast<double>(i) / nx;
      mesh.nodes(g, 1) = static_cast<double>(j) / ny;
    }
  }

  mesh.elements.resize(static_cast<Eigen::Index>(nx) * ny, 4);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int e = j * nx + i;
      mesh.elements(e, 0) = j * nnx + i;
      mesh.elements(e, 1) = j * nnx + i + 1;
      mesh.elements(e, 2) = (j + 1) * nnx + i + 1;
      mesh.elements(e, 3) = (j + 1) * nnx + i;
    }
  }

  for (int j = 0; j < nny; ++j) {
    for (int i = 0; i < nnx; ++i) {
      if (i == 0 || i == nx || j == 0 || j == ny) {
        mesh.boundary_nodes.push_back(j * nnx + i);
      }
    }
  }
  return mesh;
}

namespace {

constexpr double kPlumeStd = 0.05;
constexpr std::array<std::array<double, 2>, 4> kPlumeCenters = {
    {{0.3, 0.3}, {0.7, 0.3}, {0.7, 0.7}, {0.3, 0.7}}};
constexpr std::array<double, 4> kPlumeWeights = {2.0, -3.0, -2.0, 3.0};

}  // namespace

double source_density(double x, double y) {
  const double inv2s2 = 1.0 / (2.0 * kPlumeStd * kPlumeStd);
  const double norm = 1.0 / (2.0 * M_PI * kPlumeStd * kPlumeStd);
  double value = 0.0;
  for (std::size_t p = 0; p < kPlumeCenters.size(); ++p) {
    const double dx = x - kPlumeCenters[p][0];
    const double dy = y - kPlumeCenters[p][1];
    value += kPlumeWeights[p] * norm * std::exp(-(dx * dx + dy * dy) * inv2s2);
  }
  return value;
}

Vector source_term(const Mesh& mesh) {
  Vector load = Vector::Zero(mesh.node_count());
  // 2x2 Gauss points on the reference square [-1,1]^2.
  const double g = 1.0 / std::sqrt(3.0);
  const std::array<std::array<double, 2>, 4> gauss = {
      {{-g, -g}, {g, -g}, {g, g}, {-g, g}}};
  const double hx = mesh.hx();
  const double hy = mesh.hy();
  const double jac = 0.25 * hx * hy;  // quadrature weight 1 each

  for (int e = 0; e < mesh.element_count(); ++e) {
    const int n0 = mesh.elements(e, 0);
    const double x0 = mesh.nodes(n0, 0);
    const double y0 = mesh.nodes(n0, 1);
    for (const auto& gp : gauss) {
      const double xi = gp[0];
      const double eta = gp[1];
      const std::array<double, 4> shape = {
          0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta),
          0.25 * (1 + xi) * (1 + eta), 0.25 * (1 - xi) * (1 + eta)};
      const double px = x0 + 0.5 * (xi + 1.0) * hx;
      const double py = y0 + 0.5 * (eta + 1.0) * hy;
      const double q = source_density(px, py);
      for (int a = 0; a < 4; ++a) {
        load[mesh.elements(e, a)] += q * shape[a] * jac;
      }
    }
  }
  return load;
}

}  // namespace darom
