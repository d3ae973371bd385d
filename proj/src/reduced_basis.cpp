#include "darom/reduced_basis.hpp"

#include <cstring>
#include <fstream>

#include "darom/errors.hpp"

namespace darom {

namespace {
constexpr char kMagic[4] = {'D', 'R', 'B', '1'};

template <typename T>
void write_pod(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T value;
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw DomainError("basis checkpoint: truncated file");
  return value;
}
}  // namespace

ReducedBasis::ReducedBasis(int full_dim, int max_dim) : max_dim_(max_dim) {
  if (full_dim < 1 || max_dim < 1) {
    throw DomainError("reduced basis: dimensions must be positive");
  }
  columns_.setZero(full_dim, max_dim);
}

ReducedBasis::EnrichOutcome ReducedBasis::enrich(const Vector& snapshot_state,
                                                 SnapshotInfo info) {
  if (snapshot_state.size() != columns_.rows()) {
    throw DomainError("enrich: snapshot dimension mismatch");
  }
  if (!snapshot_state.allFinite()) {
    throw DomainError("enrich: snapshot has non-finite entries");
  }
  if (m_ >= max_dim_) return EnrichOutcome::AtCapacity;

  const double input_norm = snapshot_state.norm();
  if (input_norm == 0.0) return EnrichOutcome::Dependent;

  // Modified Gram-Schmidt, applied twice for numerical orthogonality.
  Vector v = snapshot_state;
  for (int pass = 0; pass < 2; ++pass) {
    for (int k = 0; k < m_; ++k) {
      v.noalias() -= columns_.col(k) * columns_.col(k).dot(v);
    }
  }
  const double remainder = v.norm();
  if (remainder < kDependenceTol * input_norm) {
    return EnrichOutcome::Dependent;
  }
  columns_.col(m_) = v / remainder;
  ++m_;
  ++generation_;
  snapshots_.push_back(std::move(info));
  return EnrichOutcome::Added;
}

ReducedBasis ReducedBasis::truncated(int m) const {
  if (m < 1 || m > m_) throw DomainError("truncated: bad basis dimension");
  ReducedBasis out(full_dim(), max_dim_);
  out.columns_.leftCols(m) = columns_.leftCols(m);
  out.m_ = m;
  out.generation_ = static_cast<std::uint64_t>(m);
  out.snapshots_.assign(snapshots_.begin(), snapshots_.begin() + m);
  return out;
}

ReducedBasis ReducedBasis::from_columns(const Matrix& columns, int max_dim) {
  const int m = static_cast<int>(columns.cols());
  if (max_dim < m) throw DomainError("from_columns: max_dim below column count");
  ReducedBasis out(static_cast<int>(columns.rows()), max_dim);
  out.columns_.leftCols(m) = columns;
  out.m_ = m;
  out.generation_ = static_cast<std::uint64_t>(m);
  const double ortho =
      (columns.transpose() * columns - Matrix::Identity(m, m)).cwiseAbs().maxCoeff();
  if (ortho > 1e-10) {
    throw DomainError("from_columns: columns are not orthonormal");
  }
  return out;
}

void ReducedBasis::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("basis checkpoint: cannot open " + path.string());
  os.write(kMagic, 4);
  write_pod<std::uint32_t>(os, 1);  // version
  write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(columns_.rows()));
  write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(m_));
  write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(max_dim_));
  write_pod<std::uint64_t>(os, generation_);
  // Column-major float64 payload of the active columns.
  os.write(reinterpret_cast<const char*>(columns_.data()),
           static_cast<std::streamsize>(sizeof(double) * columns_.rows() * m_));
  write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(snapshots_.size()));
  for (const auto& snap : snapshots_) {
    write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(snap.parameter.size()));
    os.write(reinterpret_cast<const char*>(snap.parameter.data()),
             static_cast<std::streamsize>(sizeof(double) * snap.parameter.size()));
    write_pod<std::uint64_t>(os, snap.chain_step);
    write_pod<std::uint8_t>(os, snap.accepted ? 1 : 0);
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(snap.source.size()));
    os.write(snap.source.data(), static_cast<std::streamsize>(snap.source.size()));
  }
  if (!os) throw DomainError("basis checkpoint: write failed");
}

ReducedBasis ReducedBasis::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("basis checkpoint: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw DomainError("basis checkpoint: bad magic");
  }
  const auto version = read_pod<std::uint32_t>(is);
  if (version != 1) throw DomainError("basis checkpoint: unsupported version");
  const auto n = read_pod<std::uint64_t>(is);
  const auto m = read_pod<std::uint64_t>(is);
  const auto max_dim = read_pod<std::uint64_t>(is);
  const auto generation = read_pod<std::uint64_t>(is);

  ReducedBasis out(static_cast<int>(n), static_cast<int>(max_dim));
  is.read(reinterpret_cast<char*>(out.columns_.data()),
          static_cast<std::streamsize>(sizeof(double) * n * m));
  if (!is) throw DomainError("basis checkpoint: truncated payload");
  out.m_ = static_cast<int>(m);
  out.generation_ = generation;

  const auto snap_count = read_pod<std::uint64_t>(is);
  out.snapshots_.resize(snap_count);
  for (auto& snap : out.snapshots_) {
    const auto dim = read_pod<std::uint64_t>(is);
    snap.parameter.resize(static_cast<Eigen::Index>(dim));
    is.read(reinterpret_cast<char*>(snap.parameter.data()),
            static_cast<std::streamsize>(sizeof(double) * dim));
    snap.chain_step = read_pod<std::uint64_t>(is);
    snap.accepted = read_pod<std::uint8_t>(is) != 0;
    const auto len = read_pod<std::uint32_t>(is);
    snap.source.resize(len);
    is.read(snap.source.data(), len);
    if (!is) throw DomainError("basis checkpoint: truncated snapshot table");
  }
  return out;
}

}  // namespace darom
