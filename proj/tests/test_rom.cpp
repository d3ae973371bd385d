#include <random>

#include "darom/errors.hpp"
#include "darom/forward_model.hpp"
#include "darom/rom.hpp"
#include "doctest.h"

using namespace darom;

TEST_SUITE_BEGIN("rom");

namespace {

struct Fixture {
  Fixture()
      : mesh(build_mesh(16, 16)),
        model(build_mesh(16, 16), PermeabilityMap::rbf_default(mesh),
              ObservationOperator::interior_grid(mesh)),
        noise(NoiseModel::isotropic(model.output_dim(), 0.01)) {}

  Vector parameter(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 0.4);
    Vector x(9);
    for (int i = 0; i < 9; ++i) x[i] = std::exp(normal(rng));
    return x;
  }

  Mesh mesh;
  ForwardModel model;
  NoiseModel noise;
};

}  // namespace

TEST_CASE("identity projection reproduces the assembled system") {
  const Mesh mesh = build_mesh(4, 4);
  const StiffnessAssembler assembler(mesh);
  const AssembledSystem sys = assembler.assemble(Vector::Ones(mesh.node_count()));
  const int n = mesh.node_count();
  const ReducedBasis identity = ReducedBasis::from_columns(Matrix::Identity(n, n), n);
  const ReducedSystem reduced = project(identity, sys);
  CHECK((reduced.stiffness - Matrix(sys.stiffness)).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((reduced.load - sys.load).cwiseAbs().maxCoeff() == 0.0);
  CHECK((reduced.constraint - sys.constraint).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("projection of a random symmetric operator stays symmetric") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  const int n = 40, m = 7;
  Matrix a_dense(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      a_dense(i, j) = a_dense(j, i) = normal(rng);
    }
  }
  Matrix v_raw(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) v_raw(i, j) = normal(rng);
  const Matrix v = Eigen::HouseholderQR<Matrix>(v_raw).householderQ() *
                   Matrix::Identity(n, m);

  AssembledSystem sys;
  sys.stiffness = a_dense.sparseView();
  sys.load = Vector::Zero(n);
  sys.constraint = Vector::Zero(n);
  sys.constraint[0] = 1.0;
  const ReducedSystem reduced = project(ReducedBasis::from_columns(v, m), sys);
  CHECK((reduced.stiffness - reduced.stiffness.transpose()).cwiseAbs().maxCoeff() <=
        1e-12);
  // Entrywise against a direct triple-product oracle.
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double direct = v.col(i).dot(a_dense * v.col(j));
      CHECK(reduced.stiffness(i, j) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("projecting an empty basis is rejected") {
  const Mesh mesh = build_mesh(4, 4);
  const StiffnessAssembler assembler(mesh);
  const AssembledSystem sys = assembler.assemble(Vector::Ones(mesh.node_count()));
  const ReducedBasis empty(mesh.node_count(), 4);
  CHECK_THROWS_AS(project(empty, sys), DomainError);
}

TEST_CASE("snapshot reproduction: zero scaled error at enriched parameters") {
  Fixture f;
  ReducedBasis basis(f.model.state_dim(), 20);
  std::vector<Vector> params;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const Vector x = f.parameter(s);
    basis.enrich(f.model.solve(x).state, {x, s, true, "test"});
    params.push_back(x);
  }
  RomEvaluator rom(f.model, basis, f.noise);
  for (const Vector& x : params) {
    CHECK(rom.true_scaled_error(x).inf_norm() <= 1e-8);
  }
}

TEST_CASE("snapshot exactness survives later enrichment") {
  Fixture f;
  ReducedBasis basis(f.model.state_dim(), 20);
  const Vector first = f.parameter(101);
  basis.enrich(f.model.solve(first).state, {first, 0, true, "test"});
  RomEvaluator rom(f.model, basis, f.noise);
  double previous = rom.true_scaled_error(first).inf_norm();
  for (std::uint64_t s = 2; s <= 8; ++s) {
    const Vector x = f.parameter(100 + s);
    basis.enrich(f.model.solve(x).state, {x, s, true, "test"});
    const double now = rom.true_scaled_error(first).inf_norm();
    CHECK(now <= std::max(previous, 1e-8) * 1.0001);
    previous = now;
  }
}

TEST_CASE("full-spanning basis reproduces the full model") {
  const Mesh mesh = build_mesh(6, 6);
  ForwardModel model(build_mesh(6, 6), PermeabilityMap::rbf_default(mesh),
                     ObservationOperator::interior_grid(mesh));
  const NoiseModel noise = NoiseModel::isotropic(model.output_dim(), 0.01);
  const int n = model.state_dim();
  const ReducedBasis full = ReducedBasis::from_columns(Matrix::Identity(n, n), n);
  RomEvaluator rom(model, full, noise);

  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal(0.0, 0.5);
  for (int rep = 0; rep < 3; ++rep) {
    Vector x(9);
    for (int i = 0; i < 9; ++i) x[i] = std::exp(normal(rng));
    const ForwardSolve fs = model.solve(x);
    const RomSolveResult rs = rom.solve(x);
    CHECK((fs.outputs - rs.outputs).cwiseAbs().maxCoeff() <=
          1e-9 * fs.outputs.cwiseAbs().maxCoeff());
    // The full residual vanishes, so the indicator is exactly zero.
    CHECK(rom.error_indicator(rs).inf_norm() <=
          1e-10 * fs.outputs.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("indicator is small at snapshots and correlates with the true error") {
  Fixture f;
  ReducedBasis basis(f.model.state_dim(), 30);
  for (std::uint64_t s = 1; s <= 4; ++s) {
    const Vector x = f.parameter(200 + s);
    basis.enrich(f.model.solve(x).state, {x, s, true, "test"});
  }
  RomEvaluator rom(f.model, basis, f.noise);

  const Vector at_snapshot = f.parameter(201);
  const RomSolveResult at_snap = rom.solve(at_snapshot);
  CHECK(rom.error_indicator(at_snap).inf_norm() <= 1e-8);

  // Correlation of log indicator vs log true error over a parameter cloud.
  std::vector<double> li, lt;
  for (std::uint64_t s = 300; s < 380; ++s) {
    const Vector x = f.parameter(s);
    const RomSolveResult rs = rom.solve(x);
    const double ind = rom.error_indicator(rs).inf_norm();
    const double tru = rom.true_scaled_error_with_outputs(
        f.model.solve(x).outputs, rs).inf_norm();
    if (ind > 0 && tru > 0) {
      li.push_back(std::log(ind));
      lt.push_back(std::log(tru));
    }
  }
  const auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double e : v) s += e;
    return s / v.size();
  };
  const double mi = mean(li), mt = mean(lt);
  double sit = 0, sii = 0, stt = 0;
  for (std::size_t i = 0; i < li.size(); ++i) {
    sit += (li[i] - mi) * (lt[i] - mt);
    sii += (li[i] - mi) * (li[i] - mi);
    stt += (lt[i] - mt) * (lt[i] - mt);
  }
  CHECK(sit / std::sqrt(sii * stt) > 0.9);
}

TEST_CASE("true scaled error halves exactly when the noise std doubles") {
  Fixture f;
  ReducedBasis basis(f.model.state_dim(), 8);
  const Vector x0 = f.parameter(41);
  basis.enrich(f.model.solve(x0).state, {x0, 0, true, "test"});
  const NoiseModel doubled = NoiseModel::isotropic(f.model.output_dim(), 0.02);
  RomEvaluator rom_a(f.model, basis, f.noise);
  RomEvaluator rom_b(f.model, basis, doubled);
  const Vector x = f.parameter(42);
  const Vector ta = rom_a.true_scaled_error(x).values;
  const Vector tb = rom_b.true_scaled_error(x).values;
  for (int j = 0; j < ta.size(); ++j) CHECK(tb[j] == 0.5 * ta[j]);
}

TEST_CASE("enrichment outcomes and the orthonormality invariant") {
  Fixture f;
  ReducedBasis basis(f.model.state_dim(), 3);
  const Vector u1 = f.model.solve(f.parameter(51)).state;
  CHECK(basis.enrich(u1, {}) == ReducedBasis::EnrichOutcome::Added);
  CHECK(basis.generation() == 1);

  SUBCASE("an existing column is rejected as dependent") {
    CHECK(basis.enrich(Vector(basis.columns().col(0)), {}) ==
          ReducedBasis::EnrichOutcome::Dependent);
    CHECK(basis.dim() == 1);
    CHECK(basis.generation() == 1);
  }

  SUBCASE("independent snapshots extend the basis orthonormally") {
    CHECK(basis.enrich(f.model.solve(f.parameter(52)).state, {}) ==
          ReducedBasis::EnrichOutcome::Added);
    CHECK(basis.enrich(f.model.solve(f.parameter(53)).state, {}) ==
          ReducedBasis::EnrichOutcome::Added);
    const Matrix gram = basis.columns().transpose() * basis.columns();
    CHECK((gram - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(basis.enrich(f.model.solve(f.parameter(54)).state, {}) ==
          ReducedBasis::EnrichOutcome::AtCapacity);
    CHECK(basis.dim() == 3);
  }
}

TEST_CASE("basis checkpoint round-trips") {
  Fixture f;
  ReducedBasis basis(f.model.state_dim(), 10);
  for (std::uint64_t s = 61; s <= 63; ++s) {
    const Vector x = f.parameter(s);
    basis.enrich(f.model.solve(x).state, {x, s, s % 2 == 0, "stage2"});
  }
  const auto path = std::filesystem::temp_directory_path() / "darom_basis_test.drb";
  basis.save(path);
  const ReducedBasis loaded = ReducedBasis::load(path);
  CHECK(loaded.dim() == basis.dim());
  CHECK(loaded.generation() == basis.generation());
  CHECK((loaded.columns() - basis.columns()).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(loaded.snapshots().size() == 3);
  CHECK(loaded.snapshots()[1].source == "stage2");
  CHECK((loaded.snapshots()[2].parameter - basis.snapshots()[2].parameter)
            .cwiseAbs()
            .maxCoeff() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("truncated prefix basis keeps enrichment order") {
  Fixture f;
  ReducedBasis basis(f.model.state_dim(), 10);
  for (std::uint64_t s = 71; s <= 75; ++s) {
    basis.enrich(f.model.solve(f.parameter(s)).state, {f.parameter(s), s, true, "t"});
  }
  const ReducedBasis prefix = basis.truncated(3);
  CHECK(prefix.dim() == 3);
  CHECK((prefix.columns() - basis.columns().leftCols(3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(prefix.snapshots().size() == 3);
}

TEST_SUITE_END();
