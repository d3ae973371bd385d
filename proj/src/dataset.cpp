#include "darom/dataset.hpp"

#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "darom/errors.hpp"

namespace darom {

namespace {

std::pair<Dataset, NoiseModel> make_dataset(const Vector& d_true, double snr,
                                            std::uint64_t seed,
                                            std::string description) {
  if (snr <= 0.0) throw DomainError("generate_data: snr must be positive");
  const double sigma = d_true.cwiseAbs().maxCoeff() / snr;
  if (sigma <= 0.0) {
    throw DomainError("generate_data: true outputs are identically zero");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  Dataset data;
  data.observations = d_true;
  for (Eigen::Index j = 0; j < d_true.size(); ++j) {
    data.observations[j] += normal(rng);
  }
  data.seed = seed;
  data.snr = snr;
  data.truth_description = std::move(description);
  return {std::move(data), NoiseModel::isotropic(static_cast<int>(d_true.size()), sigma)};
}

}  // namespace

std::pair<Dataset, NoiseModel> generate_data(const ForwardModel& model,
                                             const Vector& truth_x, double snr,
                                             std::uint64_t seed) {
  const ForwardSolve solve = model.solve(truth_x);
  auto result = make_dataset(solve.outputs, snr, seed, "parameter vector");
  result.first.truth_parameter = truth_x;
  return result;
}

std::pair<Dataset, NoiseModel> generate_data_from_field(
    const ForwardModel& model, const Vector& nodal_permeability, double snr,
    std::uint64_t seed, const std::string& description) {
  const ForwardSolve solve = model.solve_with_field(nodal_permeability);
  return make_dataset(solve.outputs, snr, seed, description);
}

void Dataset::save(const std::filesystem::path& path,
                   const ObservationOperator& obs,
                   const NoiseModel& noise) const {
  std::ofstream os(path);
  if (!os) throw DomainError("dataset: cannot open " + path.string());
  os << std::setprecision(17);
  os << "darom-dataset 1\n";
  os << "snr " << snr << "\n";
  os << "seed " << seed << "\n";
  os << "sigma " << noise.std_devs()[0] << "\n";
  os << "truth " << truth_description << "\n";
  os << "truth_parameter " << (truth_parameter ? truth_parameter->size() : 0);
  if (truth_parameter) {
    for (Eigen::Index i = 0; i < truth_parameter->size(); ++i) {
      os << " " << (*truth_parameter)[i];
    }
  }
  os << "\n";
  os << "sensors " << observations.size() << "\n";
  for (Eigen::Index j = 0; j < observations.size(); ++j) {
    os << obs.sensor_coords(j, 0) << " " << obs.sensor_coords(j, 1) << " "
       << observations[j] << "\n";
  }
}

std::pair<Dataset, NoiseModel> Dataset::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("dataset: cannot open " + path.string());
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (tag != "darom-dataset" || version != 1) {
    throw DomainError("dataset: unrecognized header");
  }
  Dataset data;
  double sigma = 0.0;
  Eigen::Index truth_dim = 0;
  is >> tag >> data.snr;
  is >> tag >> data.seed;
  is >> tag >> sigma;
  is >> tag;
  std::getline(is, data.truth_description);
  if (!data.truth_description.empty() && data.truth_description.front() == ' ') {
    data.truth_description.erase(0, 1);
  }
  is >> tag >> truth_dim;
  if (truth_dim > 0) {
    Vector truth(truth_dim);
    for (Eigen::Index i = 0; i < truth_dim; ++i) is >> truth[i];
    data.truth_parameter = truth;
  }
  Eigen::Index nd = 0;
  is >> tag >> nd;
  data.observations.resize(nd);
  for (Eigen::Index j = 0; j < nd; ++j) {
    double x, y;
    is >> x >> y >> data.observations[j];
  }
  if (!is) throw DomainError("dataset: truncated file");
  return {std::move(data), NoiseModel::isotropic(static_cast<int>(nd), sigma)};
}

}  // namespace darom
