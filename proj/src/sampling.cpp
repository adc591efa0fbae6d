#include "specpert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specpert/kernels.hpp"

namespace specpert {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t substream_key(const SeedSpec& seed, std::uint64_t replication, std::string_view role) {
  std::uint64_t h = splitmix64(seed.master_seed);
  h = splitmix64(h ^ replication);
  return splitmix64(h ^ fnv1a(role));
}

GaussianSampler make_sampler(const SymmetricOperator& sigma, const SeedSpec& seed) {
  GaussianSampler s;
  s.seed_ = seed;
  const Matrix& m = sigma.matrix();
  const double scale = max_abs(m);
  const Matrix off = m - Matrix(m.diagonal().asDiagonal());
  if (max_abs(off) == 0.0) {
    Vector d = m.diagonal();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (d(i) < -1e-10 * scale) {
        std::ostringstream os;
        os << "diagonal entry " << d(i) << " is negative";
        throw Error(ErrorKind::NotPSD, os.str());
      }
      d(i) = std::sqrt(std::max(d(i), 0.0));
    }
    s.diagonal_ = true;
    s.sqrt_diag_ = d;
    s.sqrt_sigma_ = SymmetricOperator::from_trusted(Matrix(d.asDiagonal()));
    return s;
  }
  const EigenDecomposition dec = eigh(sigma);
  const double norm = std::max(std::abs(dec.eigenvalues(0)), std::abs(dec.eigenvalues(dec.eigenvalues.size() - 1)));
  Vector root(dec.eigenvalues.size());
  for (Eigen::Index i = 0; i < root.size(); ++i) {
    const double lam = dec.eigenvalues(i);
    if (lam < -1e-10 * norm) {
      std::ostringstream os;
      os << "eigenvalue " << lam << " is below -1e-10 * ‖Σ‖";
      throw Error(ErrorKind::NotPSD, os.str());
    }
    root(i) = std::sqrt(std::max(lam, 0.0));
  }
  s.sqrt_sigma_ = SymmetricOperator::from_trusted(dec.eigenvectors * root.asDiagonal() * dec.eigenvectors.transpose());
  return s;
}

SampleBatch draw_batch(const GaussianSampler& sampler, std::size_t n, RandomStream& stream) {
  if (n == 0) throw Error(ErrorKind::EmptyBatch, "batch size must be at least 1");
  const auto rows = static_cast<Eigen::Index>(n);
  const auto p = static_cast<Eigen::Index>(sampler.dim());
  RowMatrix z(rows, p);
  stream.fill_normal(std::span<double>(z.data(), static_cast<std::size_t>(z.size())));
  if (sampler.diagonal()) {
    kernels::scale_columns(z, sampler.sqrt_sigma().matrix().diagonal());
    return SampleBatch{std::move(z)};
  }
  return SampleBatch{kernels::right_multiply(z, sampler.sqrt_sigma().matrix())};
}

SampleBatch draw_batch(const GaussianSampler& sampler, std::size_t n, std::uint64_t replication,
                       std::string_view role) {
  RandomStream stream = sampler.stream(replication, role);
  return draw_batch(sampler, n, stream);
}

SymmetricOperator gamma_matrix(const SampleBatch& batch, const SpectralStructure& ss, std::size_t r) {
  if (batch.p() != ss.dim()) throw Error(ErrorKind::DimensionMismatch, "batch and covariance dimensions differ");
  if (batch.n() == 0) throw Error(ErrorKind::EmptyBatch, "batch is empty");
  const Matrix v = ss.basis(r);
  const Matrix y = batch.vectors * v;  // coordinates of P_r X_i in the basis
  const Matrix small = y.transpose() * y / static_cast<double>(batch.n());
  return SymmetricOperator::from_trusted(v * small * v.transpose());
}

Vector gamma_eigenvalues(const SampleBatch& batch, const SpectralStructure& ss, std::size_t r) {
  if (batch.p() != ss.dim()) throw Error(ErrorKind::DimensionMismatch, "batch and covariance dimensions differ");
  if (batch.n() == 0) throw Error(ErrorKind::EmptyBatch, "batch is empty");
  const Matrix v = ss.basis(r);
  const Matrix y = batch.vectors * v;
  const Matrix small = y.transpose() * y / static_cast<double>(batch.n());
  return eigvalsh(SymmetricOperator::from_trusted(small));
}

}  // namespace specpert
