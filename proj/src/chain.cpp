#include "darom/chain.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

#include "darom/errors.hpp"

namespace darom {

namespace {

constexpr char kMagic[4] = {'D', 'C', 'H', '1'};

template <typename T>
void write_pod(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T value;
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw DomainError("chain log: truncated file");
  return value;
}

void write_step(std::ostream& os, const Vector& sample, const StepRecord& step) {
  write_pod<std::uint64_t>(os, step.index);
  os.write(reinterpret_cast<const char*>(sample.data()),
           static_cast<std::streamsize>(sizeof(double) * sample.size()));
  write_pod<std::uint8_t>(os, step.stage1_accept ? 1 : 0);
  write_pod<double>(os, step.stage2_prob);
  write_pod<std::uint8_t>(os, step.stage2_accept ? 1 : 0);
  write_pod<double>(os, step.indicator_inf);
  write_pod<double>(os, step.true_error_inf);
  write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(step.eval_kind));
  write_pod<std::uint8_t>(os, step.enriched ? 1 : 0);
  write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(step.branch));
  write_pod<std::uint16_t>(os, step.full_evals);
  write_pod<std::uint16_t>(os, step.reduced_evals);
  write_pod<std::uint64_t>(os, step.wall_ns);
}

const char* eval_kind_name(StepEvalKind kind) {
  switch (kind) {
    case StepEvalKind::None: return "none";
    case StepEvalKind::Full: return "full";
    case StepEvalKind::Reduced: return "reduced";
    case StepEvalKind::Both: return "both";
  }
  return "none";
}

}  // namespace

std::string algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Reference: return "reference";
    case Algorithm::FullTarget: return "full_target";
    case Algorithm::EpsApproximate: return "eps_approx";
  }
  return "reference";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "reference") return Algorithm::Reference;
  if (name == "full_target") return Algorithm::FullTarget;
  if (name == "eps_approx") return Algorithm::EpsApproximate;
  throw ConfigError("unknown algorithm: " + name);
}

std::uint64_t ChainRecord::total_full_evals() const {
  std::uint64_t n = 0;
  for (const auto& s : steps) n += s.full_evals;
  return n;
}

std::uint64_t ChainRecord::total_reduced_evals() const {
  std::uint64_t n = 0;
  for (const auto& s : steps) n += s.reduced_evals;
  return n;
}

double ChainRecord::eval_wall_seconds() const {
  std::uint64_t ns = 0;
  for (const auto& s : steps) ns += s.wall_ns;
  return static_cast<double>(ns) * 1e-9;
}

double ChainRecord::average_stage2_prob(std::size_t burn_in) const {
  if (steps.size() <= burn_in) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (std::size_t i = burn_in; i < steps.size(); ++i) sum += steps[i].stage2_prob;
  return sum / static_cast<double>(steps.size() - burn_in);
}

Matrix ChainRecord::samples_matrix(std::size_t burn_in) const {
  if (burn_in >= samples.size()) {
    throw DomainError("chain record: burn-in larger than the chain");
  }
  const std::size_t rows = samples.size() - burn_in;
  Matrix out(rows, dim);
  for (std::size_t i = 0; i < rows; ++i) {
    out.row(static_cast<Eigen::Index>(i)) = samples[burn_in + i].transpose();
  }
  return out;
}

void ChainRecord::save_csv(const std::filesystem::path& path) const {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw DomainError("chain csv: cannot open " + path.string());
  std::fprintf(f, "step");
  for (int c = 1; c <= dim; ++c) std::fprintf(f, ",x_%d", c);
  std::fprintf(f,
               ",stage1_accept,stage2_prob,stage2_accept,indicator_inf_norm,"
               "eval_kind,enriched,wall_time_ns\n");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const StepRecord& s = steps[i];
    std::fprintf(f, "%llu", static_cast<unsigned long long>(s.index));
    const Vector& x = samples[i + 1];
    for (int c = 0; c < dim; ++c) std::fprintf(f, ",%.17g", x[c]);
    std::fprintf(f, ",%d,%.17g,%d,%.17g,%s,%d,%llu\n", s.stage1_accept ? 1 : 0,
                 s.stage2_prob, s.stage2_accept ? 1 : 0, s.indicator_inf,
                 eval_kind_name(s.eval_kind), s.enriched ? 1 : 0,
                 static_cast<unsigned long long>(s.wall_ns));
  }
  std::fclose(f);
}

void ChainRecord::save_binary(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("chain log: cannot open " + path.string());
  os.write(kMagic, 4);
  write_pod<std::uint32_t>(os, 1);
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(dim));
  write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(algorithm));
  write_pod<std::uint64_t>(os, seed);
  if (samples.empty()) throw DomainError("chain log: record has no initial state");
  os.write(reinterpret_cast<const char*>(samples[0].data()),
           static_cast<std::streamsize>(sizeof(double) * dim));
  for (std::size_t i = 0; i < steps.size(); ++i) {
    write_step(os, samples[i + 1], steps[i]);
  }
  if (!os) throw DomainError("chain log: write failed");
}

ChainRecord ChainRecord::load_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("chain log: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw DomainError("chain log: bad magic");
  }
  const auto version = read_pod<std::uint32_t>(is);
  if (version != 1) throw DomainError("chain log: unsupported version");
  ChainRecord record;
  record.dim = static_cast<int>(read_pod<std::uint32_t>(is));
  record.algorithm = static_cast<Algorithm>(read_pod<std::uint8_t>(is));
  record.seed = read_pod<std::uint64_t>(is);
  Vector x0(record.dim);
  is.read(reinterpret_cast<char*>(x0.data()),
          static_cast<std::streamsize>(sizeof(double) * record.dim));
  if (!is) throw DomainError("chain log: truncated initial state");
  record.samples.push_back(std::move(x0));

  for (;;) {
    StepRecord s;
    is.read(reinterpret_cast<char*>(&s.index), sizeof(s.index));
    if (!is) break;  // clean end of log
    Vector x(record.dim);
    is.read(reinterpret_cast<char*>(x.data()),
            static_cast<std::streamsize>(sizeof(double) * record.dim));
    s.stage1_accept = read_pod<std::uint8_t>(is) != 0;
    s.stage2_prob = read_pod<double>(is);
    s.stage2_accept = read_pod<std::uint8_t>(is) != 0;
    s.indicator_inf = read_pod<double>(is);
    s.true_error_inf = read_pod<double>(is);
    s.eval_kind = static_cast<StepEvalKind>(read_pod<std::uint8_t>(is));
    s.enriched = read_pod<std::uint8_t>(is) != 0;
    s.branch = static_cast<char>(read_pod<std::uint8_t>(is));
    s.full_evals = read_pod<std::uint16_t>(is);
    s.reduced_evals = read_pod<std::uint16_t>(is);
    s.wall_ns = read_pod<std::uint64_t>(is);
    record.samples.push_back(std::move(x));
    record.steps.push_back(s);
  }
  // Rebuild the adaptation trace from the step metadata.
  record.adaptation.step_count = record.steps.size();
  for (const auto& s : record.steps) {
    if (s.enriched) record.adaptation.record_enrichment(s.index);
  }
  return record;
}

void ChainLogWriter::open(const std::filesystem::path& path,
                          const ChainRecord& record) {
  stream_.open(path, std::ios::binary);
  if (!stream_) throw DomainError("chain log: cannot open " + path.string());
  stream_.write(kMagic, 4);
  write_pod<std::uint32_t>(stream_, 1);
  write_pod<std::uint32_t>(stream_, static_cast<std::uint32_t>(record.dim));
  write_pod<std::uint8_t>(stream_, static_cast<std::uint8_t>(record.algorithm));
  write_pod<std::uint64_t>(stream_, record.seed);
  if (record.samples.empty()) {
    throw DomainError("chain log: record has no initial state");
  }
  stream_.write(reinterpret_cast<const char*>(record.samples[0].data()),
                static_cast<std::streamsize>(sizeof(double) * record.dim));
}

void ChainLogWriter::reopen(const std::filesystem::path& path) {
  stream_.open(path, std::ios::binary | std::ios::app);
  if (!stream_) throw DomainError("chain log: cannot reopen " + path.string());
}

void ChainLogWriter::append(const Vector& sample, const StepRecord& step) {
  write_step(stream_, sample, step);
}

void ChainLogWriter::flush() { stream_.flush(); }

}  // namespace darom
