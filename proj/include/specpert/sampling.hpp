#pragma once

#include <boost/random/normal_distribution.hpp>

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include "specpert/linalg.hpp"
#include "specpert/spectral_model.hpp"

namespace specpert {

// Role tags for the three independent subsamples of one replication.
inline constexpr std::string_view kRoleX = "X";
inline constexpr std::string_view kRoleXtilde = "Xtilde";
inline constexpr std::string_view kRoleXbar = "Xbar";

struct SeedSpec {
  std::uint64_t master_seed = 20160901;
};

// Substream key: SplitMix64 mixing of (master_seed, replication, FNV-1a(role)).
std::uint64_t substream_key(const SeedSpec& seed, std::uint64_t replication, std::string_view role);

// A deterministic stream of standard normals: std::mt19937_64 seeded with the
// substream key, normals by the ziggurat method (boost::random). The same
// (seed, replication, role) always replays the same sequence.
class RandomStream {
 public:
  RandomStream(const SeedSpec& seed, std::uint64_t replication, std::string_view role)
      : engine_(substream_key(seed, replication, role)) {}

  double normal() { return normal_(engine_); }
  void fill_normal(std::span<double> out) {
    for (double& v : out) v = normal_(engine_);
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
};

struct SampleBatch {
  RowMatrix vectors;  // n x p, one observation per row

  std::size_t n() const { return static_cast<std::size_t>(vectors.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(vectors.cols()); }
};

// Three subsamples of equal shape (X, X̃, X̄).
struct TripleSplit {
  SampleBatch x, x_tilde, x_bar;
};

// Draws N(0, Σ) vectors as Σ^{1/2} Z. Σ^{1/2} comes from eigh with
// eigenvalues in [−1e-10‖Σ‖, 0) clipped to zero; a diagonal Σ skips the
// dense product.
class GaussianSampler {
 public:
  const SymmetricOperator& sqrt_sigma() const { return sqrt_sigma_; }
  std::size_t dim() const { return sqrt_sigma_.dim(); }
  const SeedSpec& seed() const { return seed_; }
  bool diagonal() const { return diagonal_; }

  RandomStream stream(std::uint64_t replication, std::string_view role) const {
    return RandomStream(seed_, replication, role);
  }

  friend GaussianSampler make_sampler(const SymmetricOperator& sigma, const SeedSpec& seed);

 private:
  GaussianSampler() = default;
  SymmetricOperator sqrt_sigma_ = SymmetricOperator::zero(1);
  Vector sqrt_diag_;
  bool diagonal_ = false;
  SeedSpec seed_;
};

GaussianSampler make_sampler(const SymmetricOperator& sigma, const SeedSpec& seed = {});

// n draws consumed from `stream` in row order.
SampleBatch draw_batch(const GaussianSampler& sampler, std::size_t n, RandomStream& stream);
// n draws from the substream (replication, role).
SampleBatch draw_batch(const GaussianSampler& sampler, std::size_t n, std::uint64_t replication,
                       std::string_view role);

// Γ_r = (1/n) Σ_i P_r X_i ⊗ P_r X_i as a full p x p operator (rank ≤ m_r).
SymmetricOperator gamma_matrix(const SampleBatch& batch, const SpectralStructure& ss, std::size_t r);
// The m_r eigenvalues γ_k of Γ_r on the range of P_r, non-increasing.
Vector gamma_eigenvalues(const SampleBatch& batch, const SpectralStructure& ss, std::size_t r);

}  // namespace specpert
