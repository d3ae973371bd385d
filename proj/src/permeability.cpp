#include "darom/permeability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "darom/errors.hpp"

namespace darom {

PermeabilityMap PermeabilityMap::rbf(
    const Mesh& mesh, const Eigen::Matrix<double, Eigen::Dynamic, 2>& centers,
    double width) {
  if (width <= 0.0) throw DomainError("rbf map: width must be positive");
  PermeabilityMap map;
  map.kind_ = Kind::Rbf;
  map.centers_ = centers;
  map.width_ = width;
  const int n = mesh.node_count();
  const int np = static_cast<int>(centers.rows());
  map.basis_.resize(n, np);
  const double inv2w2 = 1.0 / (2.0 * width * width);
  for (int c = 0; c < np; ++c) {
    for (int g = 0; g < n; ++g) {
      const double dx = mesh.nodes(g, 0) - centers(c, 0);
      const double dy = mesh.nodes(g, 1) - centers(c, 1);
      map.basis_(g, c) = std::exp(-(dx * dx + dy * dy) * inv2w2);
    }
  }
  return map;
}

PermeabilityMap PermeabilityMap::rbf_default(const Mesh& mesh) {
  Eigen::Matrix<double, Eigen::Dynamic, 2> centers(9, 2);
  const double pos[3] = {0.2, 0.5, 0.8};
  int s = 0;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      centers(s, 0) = pos[i];
      centers(s, 1) = pos[j];
      ++s;
    }
  }
  return rbf(mesh, centers, 0.15);
}

PermeabilityMap PermeabilityMap::kl_expansion(const Mesh& mesh,
                                              double length_scale,
                                              double energy) {
  if (length_scale <= 0.0) throw DomainError("kl_expansion: length scale must be positive");
  if (energy <= 0.0 || energy > 1.0) {
    throw DomainError("kl_expansion: energy fraction must be in (0, 1]");
  }

  const auto eig_1d = [length_scale](int count, int divisions) {
    Matrix cov(count, count);
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < count; ++j) {
        const double d = static_cast<double>(i - j) / divisions;
        cov(i, j) = std::exp(-d * d / (2.0 * length_scale * length_scale));
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("kl_expansion: 1D eigendecomposition failed");
    }
    return std::make_pair(solver.eigenvalues(), solver.eigenvectors());
  };

  const auto [lam_x, vec_x] = eig_1d(mesh.nx + 1, mesh.nx);
  const auto [lam_y, vec_y] = eig_1d(mesh.ny + 1, mesh.ny);

  struct Pair {
    double value;
    int ix, iy;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(lam_x.size()) * lam_y.size());
  double max_value = 0.0;
  for (int a = 0; a < lam_x.size(); ++a) {
    for (int b = 0; b < lam_y.size(); ++b) {
      const double v = lam_x[a] * lam_y[b];
      max_value = std::max(max_value, v);
      pairs.push_back({v, a, b});
    }
  }
  const double floor = 1e-12 * max_value;
  double total = 0.0;
  for (auto& p : pairs) {
    p.value = std::max(p.value, floor);
    total += p.value;
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& a, const Pair& b) { return a.value > b.value; });

  std::size_t retained = pairs.size();
  if (energy < 1.0) {
    double cum = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      cum += pairs[k].value;
      if (cum >= energy * total) {
        retained = k + 1;
        break;
      }
    }
  }

  PermeabilityMap map;
  map.kind_ = Kind::GaussianProcessKl;
  map.length_scale_ = length_scale;
  map.kl_total_energy_ = total;
  const int n = mesh.node_count();
  map.kl_eigenvalues_.resize(retained);
  map.kl_modes_.resize(n, retained);
  map.basis_.resize(n, retained);
  const int nnx = mesh.nx + 1;
  for (std::size_t k = 0; k < retained; ++k) {
    const auto& p = pairs[k];
    map.kl_eigenvalues_[static_cast<Eigen::Index>(k)] = p.value;
    for (int g = 0; g < n; ++g) {
      const int i = g % nnx;
      const int j = g / nnx;
      map.kl_modes_(g, static_cast<Eigen::Index>(k)) = vec_x(i, p.ix) * vec_y(j, p.iy);
    }
    map.basis_.col(static_cast<Eigen::Index>(k)) =
        map.kl_modes_.col(static_cast<Eigen::Index>(k)) * std::sqrt(p.value);
  }
  return map;
}

Vector PermeabilityMap::latent_field(const Vector& x) const {
  if (x.size() != basis_.cols()) {
    throw DomainError("permeability map: parameter dimension mismatch");
  }
  return basis_ * x;
}

Vector PermeabilityMap::nodal_field(const Vector& x) const {
  Vector field = latent_field(x);
  if (kind_ == Kind::GaussianProcessKl) {
    field = field.array().exp().matrix();
  }
  if (field.minCoeff() <= 0.0) {
    throw DomainError("permeability map: field is not strictly positive");
  }
  return field;
}

Vector permeability_field(const PermeabilityMap& map, const Vector& x,
                          const Mesh& mesh) {
  if (map.mesh_node_count() != mesh.node_count()) {
    throw DomainError("permeability_field: map was built on a different mesh");
  }
  return map.nodal_field(x);
}

}  // namespace darom
