#include "darom/adaptation.hpp"

#include "darom/errors.hpp"

namespace darom {

void AdaptationConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("adaptation.epsilon must be positive");
  if (!(epsilon < epsilon0)) {
    throw ConfigError("adaptation.epsilon must be below adaptation.epsilon0");
  }
  if (subchain_length < 1) throw ConfigError("adaptation.subchain_length must be >= 1");
  if (max_basis_dim < 1) throw ConfigError("adaptation.max_basis_dim must be >= 1");
  if (!(criterion_c > 0.0)) throw ConfigError("adaptation.criterion_c must be positive");
}

bool finite_adaptation_check(const AdaptationState& state,
                             const AdaptationConfig& config) {
  if (state.enrichment_count == 0) return false;
  const double average = static_cast<double>(state.step_count) /
                         static_cast<double>(state.enrichment_count);
  return average > config.n_max();
}

}  // namespace darom
