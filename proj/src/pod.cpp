#include "darom/pod.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "darom/errors.hpp"

namespace darom {

namespace {

int resolve_retained(const Vector& eigenvalues_desc, double total_sq_sum,
                     double criterion) {
  const int count = static_cast<int>(eigenvalues_desc.size());
  double leading_sq = 0.0;
  for (int k = 0; k < count; ++k) {
    const double lam = std::max(eigenvalues_desc[k], 0.0);
    leading_sq += lam * lam;
    const double trailing_sq = std::max(total_sq_sum - leading_sq, 0.0);
    if (std::sqrt(trailing_sq) <= criterion * std::sqrt(total_sq_sum)) {
      return k + 1;
    }
  }
  return count;
}

}  // namespace

PodSpectrum pod_spectrum(const Matrix& snapshots, double criterion) {
  if (snapshots.cols() < 1) throw DomainError("pod: need at least one snapshot");
  if (criterion <= 0.0 || criterion > 1.0) {
    throw DomainError("pod: energy criterion must be in (0, 1]");
  }
  // Same nonzero spectrum either way; eigendecompose the smaller side.
  Matrix gram;
  if (snapshots.rows() <= snapshots.cols()) {
    gram.noalias() = snapshots * snapshots.transpose();
  } else {
    gram.noalias() = snapshots.transpose() * snapshots;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("pod: eigendecomposition failed");
  }
  PodSpectrum out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.total_sq_sum = out.eigenvalues.array().max(0.0).square().sum();
  out.criterion = criterion;
  out.retained = resolve_retained(out.eigenvalues, out.total_sq_sum, criterion);
  return out;
}

PodSpectrum pod_spectrum_randomized(const Matrix& snapshots, double criterion,
                                    int block, int power_iterations,
                                    std::uint64_t seed) {
  const int n_snap = static_cast<int>(snapshots.cols());
  if (n_snap < 1) throw DomainError("pod: need at least one snapshot");
  block = std::min(block, n_snap);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix probe(n_snap, block);
  for (Eigen::Index i = 0; i < probe.size(); ++i) probe.data()[i] = normal(rng);

  // Subspace iteration on G = S^T S without forming G.
  const auto apply_gram = [&](const Matrix& q) -> Matrix {
    return snapshots.transpose() * (snapshots * q);
  };
  Matrix q = Eigen::HouseholderQR<Matrix>(apply_gram(probe))
                 .householderQ() *
             Matrix::Identity(n_snap, block);
  for (int it = 0; it < power_iterations; ++it) {
    q = Eigen::HouseholderQR<Matrix>(apply_gram(q)).householderQ() *
        Matrix::Identity(n_snap, block);
  }
  const Matrix small = q.transpose() * apply_gram(q);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (small + small.transpose()));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("pod: randomized eigendecomposition failed");
  }

  PodSpectrum out;
  out.eigenvalues = solver.eigenvalues().reverse();
  // Total energy from |G|_F^2 = sum of squared eigenvalues, block-accumulated
  // to bound the workspace.
  double frob_sq = 0.0;
  const int chunk = 512;
  for (int start = 0; start < n_snap; start += chunk) {
    const int width = std::min(chunk, n_snap - start);
    const Matrix g_block =
        snapshots.transpose() * snapshots.middleCols(start, width);
    frob_sq += g_block.squaredNorm();
  }
  out.total_sq_sum = frob_sq;
  out.criterion = criterion;
  out.retained = resolve_retained(out.eigenvalues, out.total_sq_sum, criterion);
  if (out.retained >= static_cast<int>(out.eigenvalues.size())) {
    throw NumericalError(
        "pod: probe block too small for the requested energy criterion");
  }
  return out;
}

Matrix prior_snapshots(const ForwardModel& model, const PriorModel& prior,
                       int n_samples, std::uint64_t seed, int n_threads) {
  if (n_samples < 2) throw DomainError("pod: need at least two prior samples");
  std::mt19937_64 rng(seed);
  std::vector<Vector> params;
  params.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) params.push_back(prior.sample(rng));

  Matrix snapshots(model.state_dim(), n_samples);
  if (n_threads <= 0) {
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  const auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_samples || failed.load()) return;
      try {
        snapshots.col(i) = model.solve(params[i]).state;
      } catch (...) {
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failed.load()) throw NumericalError("pod: a snapshot solve failed");
  return snapshots;
}

std::pair<ReducedBasis, PodSpectrum> pod_basis(const Matrix& snapshots,
                                               double energy_criterion,
                                               int max_dim) {
  PodSpectrum spectrum = pod_spectrum(snapshots, energy_criterion);
  const int n = static_cast<int>(snapshots.rows());
  const int n_snap = static_cast<int>(snapshots.cols());

  Matrix modes;
  if (n <= n_snap) {
    Matrix cov;
    cov.noalias() = snapshots * snapshots.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
    modes = solver.eigenvectors().rightCols(spectrum.retained).rowwise().reverse();
  } else {
    Matrix gram;
    gram.noalias() = snapshots.transpose() * snapshots;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    const Matrix w = solver.eigenvectors().rightCols(spectrum.retained).rowwise().reverse();
    modes.noalias() = snapshots * w;
    for (int k = 0; k < spectrum.retained; ++k) {
      const double lam = solver.eigenvalues()[n_snap - 1 - k];
      modes.col(k) /= std::sqrt(std::max(lam, 1e-300));
    }
  }

  if (max_dim <= 0) max_dim = spectrum.retained;
  max_dim = std::max(max_dim, spectrum.retained);
  ReducedBasis basis(n, max_dim);
  for (int k = 0; k < spectrum.retained; ++k) {
    SnapshotInfo info;
    info.parameter = Vector();
    info.chain_step = static_cast<std::uint64_t>(k);
    info.source = "pod";
    basis.enrich(modes.col(k), std::move(info));
  }
  return {std::move(basis), std::move(spectrum)};
}

std::pair<ReducedBasis, PodSpectrum> pod_from_prior(
    const ForwardModel& model, const PriorModel& prior, int n_samples,
    double energy_criterion, std::uint64_t seed, int max_dim, int n_threads) {
  const Matrix snapshots =
      prior_snapshots(model, prior, n_samples, seed, n_threads);
  return pod_basis(snapshots, energy_criterion, max_dim);
}

}  // namespace darom
