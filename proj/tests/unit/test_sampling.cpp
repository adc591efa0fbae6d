#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "specpert/estimators.hpp"
#include "specpert/sampling.hpp"

using namespace specpert;

namespace {

bool throws_kind(auto&& f, ErrorKind kind) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("draws are reproducible per substream") {
  const GaussianSampler s = make_sampler(build_spiked(single_spike(6, 2.0, 0.1)), SeedSpec{9});
  const SampleBatch a = draw_batch(s, 50, 3, kRoleX);
  const SampleBatch b = draw_batch(s, 50, 3, kRoleX);
  CHECK((a.vectors.array() == b.vectors.array()).all());
  CHECK_FALSE((a.vectors.array() == draw_batch(s, 50, 3, kRoleXtilde).vectors.array()).all());
  CHECK_FALSE((a.vectors.array() == draw_batch(s, 50, 4, kRoleX).vectors.array()).all());
  const GaussianSampler other = make_sampler(build_spiked(single_spike(6, 2.0, 0.1)), SeedSpec{10});
  CHECK_FALSE((a.vectors.array() == draw_batch(other, 50, 3, kRoleX).vectors.array()).all());
  CHECK(substream_key(SeedSpec{1}, 0, kRoleX) != substream_key(SeedSpec{1}, 0, kRoleXbar));
}

TEST_CASE("sample covariance approaches Σ for a rotated model") {
  std::mt19937_64 gen(7);
  Vector values(5);
  values << 3, 2, 1, 0.5, 0.25;
  const SymmetricOperator sigma = testing::with_spectrum(gen, values);
  const GaussianSampler s = make_sampler(sigma, SeedSpec{1});
  const std::size_t n = 200000;
  const SymmetricOperator sh = sample_covariance(draw_batch(s, n, 0, kRoleX));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      const double se = std::sqrt((sigma(i, j) * sigma(i, j) + sigma(i, i) * sigma(j, j)) / static_cast<double>(n));
      CHECK(std::abs(sh(i, j) - sigma(i, j)) < 5.0 * se);
    }
}

TEST_CASE("independent roles are uncorrelated") {
  const GaussianSampler s = make_sampler(SymmetricOperator::identity(4), SeedSpec{2});
  const std::size_t n = 50000;
  const SampleBatch x = draw_batch(s, n, 0, kRoleX);
  const SampleBatch y = draw_batch(s, n, 0, kRoleXtilde);
  const Matrix cross = x.vectors.transpose() * y.vectors / static_cast<double>(n);
  CHECK(max_abs(cross) < 6.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("zero covariance gives zero draws") {
  const GaussianSampler s = make_sampler(SymmetricOperator::zero(3));
  CHECK(max_abs(Matrix(draw_batch(s, 10, 0, kRoleX).vectors)) == 0.0);
}

TEST_CASE("invalid samplers and batches") {
  CHECK(throws_kind([] { make_sampler(SymmetricOperator::diagonal(std::vector<double>{1.0, -0.5})); }, ErrorKind::NotPSD));
  const auto indefinite = make_symmetric(std::vector<std::vector<double>>{{1, 2}, {2, 1}});
  CHECK(throws_kind([&] { make_sampler(indefinite); }, ErrorKind::NotPSD));
  const GaussianSampler s = make_sampler(SymmetricOperator::identity(2));
  CHECK(throws_kind([&] { draw_batch(s, 0, 0, kRoleX); }, ErrorKind::EmptyBatch));
}

TEST_CASE("Γ_r concentrates on P_r") {
  const SpectralStructure ss = spectral_structure(SymmetricOperator::diagonal(std::vector<double>{3, 2, 2, 1}));
  const GaussianSampler s = make_sampler(ss.source(), SeedSpec{4});
  const std::size_t n = 100000;
  const SampleBatch batch = draw_batch(s, n, 0, kRoleX);
  const SymmetricOperator g = gamma_matrix(batch, ss, 1);
  const Matrix& p = ss.projector(1).matrix();
  CHECK(max_abs(p * g.matrix() * p - g.matrix()) < 1e-12);
  CHECK(max_abs(g.matrix() - 2.0 * p) < 5.0 * 2.0 * std::sqrt(2.0 / static_cast<double>(n)));
  const Vector gam = gamma_eigenvalues(batch, ss, 1);
  REQUIRE(gam.size() == 2);
  CHECK(gam(0) >= gam(1));
  CHECK(gam.sum() == doctest::Approx(trace(g)).epsilon(1e-12));
  CHECK(gam.minCoeff() >= 0.0);
}

TEST_CASE("square root is exact and rotation equivariant") {
  std::mt19937_64 gen(8);
  Vector values(4);
  values << 2, 1, 0.5, 0.1;
  const SymmetricOperator sigma = testing::with_spectrum(gen, values);
  const Matrix q = testing::random_orthogonal(gen, 4);
  const auto rotated = SymmetricOperator::from_trusted(q * sigma.matrix() * q.transpose());
  const Matrix root = make_sampler(sigma).sqrt_sigma().matrix();
  CHECK(max_abs(root * root - sigma.matrix()) < 1e-12);
  CHECK(max_abs(make_sampler(rotated).sqrt_sigma().matrix() - q * root * q.transpose()) < 1e-12);
}
