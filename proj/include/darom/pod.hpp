#pragma once

#include <cstdint>
#include <utility>

#include "darom/forward_model.hpp"
#include "darom/prior.hpp"
#include "darom/reduced_basis.hpp"

namespace darom {

/// Eigenvalue spectrum of a snapshot set with the 2-norm energy truncation
/// rule: retain the smallest leading count whose trailing eigenvalue 2-norm
/// is at most `criterion` times the total.
struct PodSpectrum {
  Vector eigenvalues;   // descending; may hold only the leading block
  double total_sq_sum;  // sum of squared eigenvalues over the full spectrum
  int retained = 0;
  double criterion = 0.0;
};

/// Exact spectrum by dense eigendecomposition of the snapshot Gramian
/// (method of snapshots, no mean subtraction); the covariance form is used
/// when the state dimension is the smaller side.
PodSpectrum pod_spectrum(const Matrix& snapshots, double criterion);

/// Leading block of the spectrum by randomized subspace iteration on the
/// Gramian; the trailing energy is recovered from the Frobenius norm.
/// Intended for snapshot sets too large for the dense route.
PodSpectrum pod_spectrum_randomized(const Matrix& snapshots, double criterion,
                                    int block = 256, int power_iterations = 3,
                                    std::uint64_t seed = 0);

/// Draws `n_samples` prior samples, solves the full model at each (in
/// parallel), and builds the POD basis of the snapshot set truncated at the
/// energy criterion. Basis columns are re-orthonormalized through the
/// standard enrichment path.
std::pair<ReducedBasis, PodSpectrum> pod_from_prior(
    const ForwardModel& model, const PriorModel& prior, int n_samples,
    double energy_criterion, std::uint64_t seed, int max_dim = 0,
    int n_threads = 0);

/// Snapshot matrix of prior-sample solves (column = state), parallelized.
Matrix prior_snapshots(const ForwardModel& model, const PriorModel& prior,
                       int n_samples, std::uint64_t seed, int n_threads = 0);

/// POD basis of an explicit snapshot matrix.
std::pair<ReducedBasis, PodSpectrum> pod_basis(const Matrix& snapshots,
                                               double energy_criterion,
                                               int max_dim = 0);

}  // namespace darom
