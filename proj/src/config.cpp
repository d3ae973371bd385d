#include "darom/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "darom/errors.hpp"

namespace darom {

std::string problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Rbf9d: return "rbf9d";
    case ProblemKind::GpHighdim: return "gp_highdim";
    case ProblemKind::Toy2d: return "toy2d";
  }
  return "rbf9d";
}

ProblemKind problem_from_name(const std::string& name) {
  if (name == "rbf9d") return ProblemKind::Rbf9d;
  if (name == "gp_highdim") return ProblemKind::GpHighdim;
  if (name == "toy2d") return ProblemKind::Toy2d;
  throw ConfigError("experiment.problem: unknown problem '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (iterations > 0 && burn_in >= iterations) {
    throw ConfigError("experiment.burn_in must be below experiment.iterations");
  }
  if (iterations == 0 && burn_in != 0) {
    throw ConfigError("experiment.burn_in must be 0 for a 0-iteration run");
  }
  if (mesh_nx < 2 || mesh_ny < 2) throw ConfigError("mesh.nx and mesh.ny must be >= 2");
  if (snr <= 0.0) throw ConfigError("data.snr must be positive");
  if (sigma0 <= 0.0) throw ConfigError("prior.sigma0 must be positive");
  if (kl_length_scale <= 0.0) throw ConfigError("kl.length_scale must be positive");
  if (kl_energy <= 0.0 || kl_energy > 1.0) throw ConfigError("kl.energy must be in (0, 1]");
  if (sensor_spacing <= 0.0 || sensor_spacing >= 0.5) {
    throw ConfigError("sensors.spacing must be in (0, 0.5)");
  }
  if (toy_approx_amp < 0.0) throw ConfigError("toy.approx_amp must be nonnegative");
  if (pilot_scale <= 0.0) throw ConfigError("proposal.pilot_scale must be positive");
  AdaptationConfig adaptation{epsilon, epsilon0, subchain_length, max_basis_dim,
                              criterion_c};
  adaptation.validate();
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string ExperimentConfig::emit() const {
  std::ostringstream os;
  os << "[experiment]\n";
  os << "problem = " << problem_name(problem) << "\n";
  os << "algorithm = " << algorithm_name(algorithm) << "\n";
  os << "iterations = " << iterations << "\n";
  os << "burn_in = " << burn_in << "\n";
  os << "seed = " << seed << "\n";
  os << "output = " << output << "\n";
  os << "\n[mesh]\n";
  os << "nx = " << mesh_nx << "\n";
  os << "ny = " << mesh_ny << "\n";
  os << "\n[data]\n";
  os << "snr = " << format_double(snr) << "\n";
  os << "noise_seed = " << noise_seed << "\n";
  os << "\n[prior]\n";
  os << "sigma0 = " << format_double(sigma0) << "\n";
  os << "\n[kl]\n";
  os << "length_scale = " << format_double(kl_length_scale) << "\n";
  os << "energy = " << format_double(kl_energy) << "\n";
  os << "\n[toy]\n";
  os << "approx_amp = " << format_double(toy_approx_amp) << "\n";
  os << "\n[sensors]\n";
  os << "spacing = " << format_double(sensor_spacing) << "\n";
  os << "\n[adaptation]\n";
  os << "epsilon = " << format_double(epsilon) << "\n";
  os << "epsilon0 = " << format_double(epsilon0) << "\n";
  os << "subchain_length = " << subchain_length << "\n";
  os << "max_basis_dim = " << max_basis_dim << "\n";
  os << "criterion_c = " << format_double(criterion_c) << "\n";
  os << "\n[proposal]\n";
  os << "pilot_steps = " << pilot_steps << "\n";
  os << "pilot_scale = " << format_double(pilot_scale) << "\n";
  os << "pilot_seed = " << pilot_seed << "\n";
  os << "scale = " << format_double(proposal_scale) << "\n";
  return os.str();
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig config;

  using Setter = std::function<void(ExperimentConfig&, const std::string&)>;
  const auto to_u64 = [](const std::string& key, const std::string& v) {
    try {
      return static_cast<std::uint64_t>(std::stoull(v));
    } catch (...) {
      throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
    }
  };
  const auto to_int = [](const std::string& key, const std::string& v) {
    try {
      return std::stoi(v);
    } catch (...) {
      throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
  };
  const auto to_double = [](const std::string& key, const std::string& v) {
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (...) {
      throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
  };

  const std::map<std::string, Setter> setters = {
      {"experiment.problem", [](auto& c, const auto& v) { c.problem = problem_from_name(v); }},
      {"experiment.algorithm", [](auto& c, const auto& v) { c.algorithm = algorithm_from_name(v); }},
      {"experiment.iterations", [&](auto& c, const auto& v) { c.iterations = to_u64("experiment.iterations", v); }},
      {"experiment.burn_in", [&](auto& c, const auto& v) { c.burn_in = to_u64("experiment.burn_in", v); }},
      {"experiment.seed", [&](auto& c, const auto& v) { c.seed = to_u64("experiment.seed", v); }},
      {"experiment.output", [](auto& c, const auto& v) { c.output = v; }},
      {"mesh.nx", [&](auto& c, const auto& v) { c.mesh_nx = to_int("mesh.nx", v); }},
      {"mesh.ny", [&](auto& c, const auto& v) { c.mesh_ny = to_int("mesh.ny", v); }},
      {"data.snr", [&](auto& c, const auto& v) { c.snr = to_double("data.snr", v); }},
      {"data.noise_seed", [&](auto& c, const auto& v) { c.noise_seed = to_u64("data.noise_seed", v); }},
      {"prior.sigma0", [&](auto& c, const auto& v) { c.sigma0 = to_double("prior.sigma0", v); }},
      {"kl.length_scale", [&](auto& c, const auto& v) { c.kl_length_scale = to_double("kl.length_scale", v); }},
      {"kl.energy", [&](auto& c, const auto& v) { c.kl_energy = to_double("kl.energy", v); }},
      {"toy.approx_amp", [&](auto& c, const auto& v) { c.toy_approx_amp = to_double("toy.approx_amp", v); }},
      {"sensors.spacing", [&](auto& c, const auto& v) { c.sensor_spacing = to_double("sensors.spacing", v); }},
      {"adaptation.epsilon", [&](auto& c, const auto& v) { c.epsilon = to_double("adaptation.epsilon", v); }},
      {"adaptation.epsilon0", [&](auto& c, const auto& v) { c.epsilon0 = to_double("adaptation.epsilon0", v); }},
      {"adaptation.subchain_length", [&](auto& c, const auto& v) { c.subchain_length = to_int("adaptation.subchain_length", v); }},
      {"adaptation.max_basis_dim", [&](auto& c, const auto& v) { c.max_basis_dim = to_int("adaptation.max_basis_dim", v); }},
      {"adaptation.criterion_c", [&](auto& c, const auto& v) { c.criterion_c = to_double("adaptation.criterion_c", v); }},
      {"proposal.pilot_steps", [&](auto& c, const auto& v) { c.pilot_steps = to_u64("proposal.pilot_steps", v); }},
      {"proposal.pilot_scale", [&](auto& c, const auto& v) { c.pilot_scale = to_double("proposal.pilot_scale", v); }},
      {"proposal.pilot_seed", [&](auto& c, const auto& v) { c.pilot_seed = to_u64("proposal.pilot_seed", v); }},
      {"proposal.scale", [&](auto& c, const auto& v) { c.proposal_scale = to_double("proposal.scale", v); }},
  };

  std::istringstream is(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      }
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    }
    const std::string qualified = section + "." + key;
    const auto it = setters.find(qualified);
    if (it == setters.end()) {
      throw ConfigError("unknown configuration key '" + qualified + "'");
    }
    it->second(config, value);
  }
  config.validate();
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << is.rdbuf();
  return parse(buffer.str());
}

void ExperimentConfig::save(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write config file " + path.string());
  os << emit();
}

}  // namespace darom
