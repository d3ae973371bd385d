#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "darom/forward_model.hpp"
#include "darom/noise.hpp"

namespace darom {

/// Synthetic observations with full provenance so runs are reproducible.
struct Dataset {
  Vector observations;  // d_obs
  std::optional<Vector> truth_parameter;
  std::uint64_t seed = 0;
  double snr = 0.0;
  std::string truth_description;

  /// Text record (sensor coords, observations, sigma, seed, truth); the
  /// field order is documented in docs/formats.md.
  void save(const std::filesystem::path& path, const ObservationOperator& obs,
            const NoiseModel& noise) const;
  static std::pair<Dataset, NoiseModel> load(const std::filesystem::path& path);
};

/// d_obs = F(truth) + e with sigma = max_j |F(truth)_j| / snr and e drawn
/// N(0, sigma^2) from the given seed.
std::pair<Dataset, NoiseModel> generate_data(const ForwardModel& model,
                                             const Vector& truth_x, double snr,
                                             std::uint64_t seed);

/// Same, for a synthetic-truth permeability field outside the parameter
/// map's range (used by the high-dimensional problem to avoid the inverse
/// crime).
std::pair<Dataset, NoiseModel> generate_data_from_field(
    const ForwardModel& model, const Vector& nodal_permeability, double snr,
    std::uint64_t seed, const std::string& description);

}  // namespace darom
