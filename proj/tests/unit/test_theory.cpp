#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "specpert/theory.hpp"

using namespace specpert;

namespace {

SymmetricOperator diag(std::vector<double> d) { return SymmetricOperator::diagonal(d); }

bool throws_kind(auto&& f, ErrorKind kind) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Random model: 2–5 clusters with multiplicities 1–3 and a random basis.
SymmetricOperator random_model(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> clusters(2, 5), mult(1, 3);
  std::uniform_real_distribution<double> step(0.2, 2.0);
  std::vector<double> values;
  double mu = 0.3;
  const int k = clusters(gen);
  for (int c = 0; c < k; ++c) {
    mu += step(gen);
    for (int j = mult(gen); j > 0; --j) values.push_back(mu);
  }
  const Vector v = Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  return testing::with_spectrum(gen, v);
}

}  // namespace

TEST_CASE("risk and variance constants of diag(2,1,1)") {
  const SpectralStructure ss = spectral_structure(diag({2, 1, 1}));
  CHECK(a_r_operator(ss, 0) == doctest::Approx(8.0));
  CHECK(a_r_eigensum(ss, 0) == doctest::Approx(8.0));
  CHECK(b_r_operator(ss, 0) == doctest::Approx(8.0));
  CHECK(b_r_eigensum(ss, 0) == doctest::Approx(8.0));
  CHECK(var_linear_exact(ss, 0, 100) == doctest::Approx(0.006656).epsilon(1e-12));
}

TEST_CASE("three singleton clusters") {
  const SpectralStructure ss = spectral_structure(diag({3, 2, 1}));
  CHECK(a_r_eigensum(ss, 1) == doctest::Approx(16.0));
  CHECK(a_r_operator(ss, 1) == doctest::Approx(16.0));
}

TEST_CASE("single cluster constants vanish") {
  const SpectralStructure ss = spectral_structure(SymmetricOperator::identity(4));
  CHECK(a_r_operator(ss, 0) == 0.0);
  CHECK(a_r_eigensum(ss, 0) == 0.0);
  CHECK(b_r_operator(ss, 0) == 0.0);
  CHECK(b_r_eigensum(ss, 0) == 0.0);
  const SpectralStructure rank1 = spectral_structure(diag({2, 0, 0}));
  CHECK(a_r_operator(rank1, 0) == 0.0);
}

TEST_CASE("invalid cluster index") {
  const SpectralStructure ss = spectral_structure(diag({2, 1}));
  CHECK(throws_kind([&] { a_r_operator(ss, 2); }, ErrorKind::InvalidCluster));
  CHECK(throws_kind([&] { b_r_eigensum(ss, 5); }, ErrorKind::InvalidCluster));
}

TEST_CASE("spiked closed forms") {
  const SpikedModel m = single_spike(1000, 2.0, 0.1);
  CHECK(a_r_spiked(m, 0) == doctest::Approx(2.0 * 999 * 2.1 * 0.1 / 4.0).epsilon(1e-12));
  CHECK(a_r_spiked(m, 0) == doctest::Approx(104.895).epsilon(1e-12));
  const double b = 2.0 * std::sqrt(2.0) * 2.1 * 0.1 * std::sqrt(999.0) / 4.0;
  CHECK(b_r_spiked(m, 0) == doctest::Approx(b).epsilon(1e-12));
  CHECK(b_r_spiked_asymptotic(m, 0) == doctest::Approx(2.0 * std::sqrt(2.0) * 2.1 * 0.1 * std::sqrt(1000.0) / 4.0));
  CHECK(throws_kind([&] { a_r_spiked(m, 1); }, ErrorKind::SpikeIndexOutOfRange));
  CHECK(throws_kind([&] { b_r_spiked(m, 1); }, ErrorKind::SpikeIndexOutOfRange));

  SpikedModel flat = single_spike(1, 2.0, 0.1);
  flat.p = 1;
  CHECK(a_r_spiked(flat, 0) == 0.0);
}

TEST_CASE("spiked closed forms match the generic routes") {
  const SpikedModel m = single_spike(1000, 2.0, 0.1);
  const SpectralStructure ss = spectral_structure(build_spiked(m));
  CHECK(rel(a_r_spiked(m, 0), a_r_operator(ss, 0)) < 1e-9);
  CHECK(rel(a_r_spiked(m, 0), a_r_eigensum(ss, 0)) < 1e-9);
  CHECK(rel(b_r_spiked(m, 0), b_r_operator(ss, 0)) < 1e-9);
  CHECK(rel(b_r_spiked(m, 0), b_r_eigensum(ss, 0)) < 1e-9);

  std::mt19937_64 gen(41);
  SpikedModel two;
  two.p = 40;
  two.spike_variances = {5.0, 2.0, 0.7};
  two.noise_variance = 0.4;
  two.spike_directions = testing::random_orthogonal(gen, 40).leftCols(3);
  const SpectralStructure s2 = spectral_structure(build_spiked(two));
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(rel(a_r_spiked(two, r), a_r_operator(s2, r)) < 1e-9);
    CHECK(rel(b_r_spiked(two, r), b_r_operator(s2, r)) < 1e-9);
  }
}

TEST_CASE("spiked B approaches its large-p form") {
  for (std::size_t p : {100u, 1000u, 10000u}) {
    const SpikedModel one = single_spike(p, 2.0, 0.1);
    const double expect = std::sqrt((static_cast<double>(p) - 1.0) / static_cast<double>(p));
    CHECK(b_r_spiked(one, 0) / b_r_spiked_asymptotic(one, 0) == doctest::Approx(expect).epsilon(1e-12));
  }
  double prev = 1e9;
  for (std::size_t p : {100u, 1000u, 10000u, 100000u}) {
    SpikedModel m;
    m.p = p;
    m.spike_variances = {2.0, 1.0};
    m.noise_variance = 0.1;
    const double dev = std::abs(b_r_spiked(m, 0) / b_r_spiked_asymptotic(m, 0) - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("dual routes and bounds on random multi-cluster models") {
  std::mt19937_64 gen(42);
  for (int t = 0; t < 50; ++t) {
    const SpectralStructure ss = spectral_structure(random_model(gen));
    for (std::size_t r = 0; r < ss.num_clusters(); ++r) {
      CHECK(rel(a_r_operator(ss, r), a_r_eigensum(ss, r)) < 1e-10);
      CHECK(rel(b_r_operator(ss, r), b_r_eigensum(ss, r)) < 1e-10);
      if (ss.has_guarded_gap(r)) {
        CHECK(a_r_eigensum(ss, r) <= a_r_upper_bound(ss, r) * (1 + 1e-12));
      }
      CHECK(a_r_eigensum(ss, r) >= a_r_lower_bound(ss, r) * (1 - 1e-12));
    }
  }
}

TEST_CASE("variance identity limits") {
  const SpectralStructure ss = spectral_structure(diag({3, 1, 1, 0.5}));
  const double b = b_r_eigensum(ss, 0);
  const double n = 1e7;
  CHECK(var_linear_exact(ss, 0, static_cast<std::size_t>(n)) * n * n == doctest::Approx(b * b).epsilon(1e-6));
  CHECK_THROWS_AS(var_linear_exact(ss, 0, 0), Error);
}

TEST_CASE("unit-noise PCA risk") {
  SpikedModel m = single_spike(101, 2.0, 1.0);
  CHECK(birnbaum_risk(m, 100, 0) == doctest::Approx(0.75));
  CHECK(throws_kind([] { birnbaum_risk(single_spike(10, 2.0, 0.5), 10, 0); }, ErrorKind::RequiresUnitNoise));
  SpikedModel big = single_spike(5000, 4.0, 1.0);
  const double ratio = a_r_spiked(big, 0) / 1e6 / birnbaum_risk(big, 1000000, 0);
  CHECK(ratio >= 1.9);
  CHECK(ratio <= 2.1);
}

TEST_CASE("operator-norm envelope") {
  CHECK(risk_envelope_opnorm(SymmetricOperator::identity(7), 7) == doctest::Approx(1.0));
  const auto sigma = build_spiked(single_spike(1000, 2.0, 0.1));
  CHECK(risk_envelope_opnorm(sigma, 1000) == doctest::Approx(2.1 * std::sqrt(102.0 / 2.1 / 1000.0)).epsilon(1e-12));
  CHECK(risk_envelope_opnorm(sigma, 1000) == doctest::Approx(2.1 * 0.2204).epsilon(1e-3));
  CHECK(risk_envelope_opnorm(sigma * 3.0, 500) == doctest::Approx(3.0 * risk_envelope_opnorm(sigma, 500)));
  const SpectralStructure ss = spectral_structure(sigma);
  CHECK(risk_envelope_opnorm(ss, 20) == doctest::Approx(risk_envelope_opnorm(sigma, 20)));
}

TEST_CASE("theory constants bundle") {
  const SpectralStructure ss = spectral_structure(diag({2, 1, 1}));
  const TheoryConstants t = theory_constants(ss, 0, 100);
  CHECK(t.a_r == doctest::Approx(8.0));
  CHECK(t.b_r == doctest::Approx(8.0));
  CHECK(t.risk_approx == doctest::Approx(0.08));
  CHECK(t.var_linear_exact == doctest::Approx(0.006656));
  CHECK(t.effective_rank == doctest::Approx(2.0));
  CHECK(t.guarded_gap == doctest::Approx(1.0));
  CHECK(t.m_r == 1);
  CHECK(std::isnan(theory_constants(ss, 1, 100).guarded_gap));
}
