#include <doctest.h>

#include <cmath>
#include <vector>

#include "specpert/estimators.hpp"
#include "specpert/montecarlo.hpp"

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

SampleBatch rows(std::vector<std::vector<double>> r) {
  RowMatrix x(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.front().size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r[i].size(); ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r[i][j];
  return SampleBatch{x};
}

SymmetricOperator diag(std::vector<double> d) { return SymmetricOperator::diagonal(d); }

}  // namespace

TEST_CASE("sample covariance of basis vectors") {
  const auto one = sample_covariance(rows({{1, 0}}));
  CHECK(max_abs(one.matrix() - diag({1, 0}).matrix()) == 0.0);
  const auto two = sample_covariance(rows({{1, 0}, {0, 1}}));
  CHECK(max_abs(two.matrix() - 0.5 * Matrix::Identity(2, 2)) == 0.0);
  CHECK(throws_kind([] { sample_covariance(SampleBatch{RowMatrix(0, 3)}); }, ErrorKind::EmptyBatch));
}

TEST_CASE("sample covariance is uncentered unless asked") {
  const SampleBatch b = rows({{1, 1}, {3, 1}});
  CHECK(sample_covariance(b)(0, 0) == doctest::Approx(5.0));
  CHECK(sample_covariance(b, true)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("sample covariance converges and stays PSD") {
  const std::size_t n = 100000;
  const GaussianSampler s = make_sampler(diag({2, 1}));
  const auto sh = sample_covariance(draw_batch(s, n, 0, kRoleX));
  // Standard errors of the entries of Σ̂ for Gaussian data: √(2σ_ii²/n), √(σ_11σ_22/n).
  CHECK(std::abs(sh(0, 0) - 2.0) < 5.0 * std::sqrt(2.0 * 4.0 / n));
  CHECK(std::abs(sh(1, 1) - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(sh(0, 1)) < 5.0 * std::sqrt(2.0 / n));
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto small = sample_covariance(draw_batch(make_sampler(diag({3, 1, 1, 0.5})), 3, rep, kRoleX));
    CHECK(eigvalsh(small).minCoeff() >= -1e-10 * op_norm(small));
  }
}

TEST_CASE("bias estimator") {
  const auto p1 = diag({1, 0, 0}), p2 = diag({0, 1, 0});
  CHECK(bias_estimator(p1, p1) == doctest::Approx(0.0));
  CHECK(bias_estimator(p1, p2) == doctest::Approx(-1.0));
  const double h = 1.0 / std::sqrt(2.0);
  Matrix u(3, 1);
  u << h, h, 0;
  const auto tilt = SymmetricOperator::from_trusted(u * u.transpose());
  CHECK(bias_estimator(p1, tilt) == doctest::Approx(bias_estimator(tilt, p1)));
  CHECK(bias_estimator(p1, tilt) == doctest::Approx(std::sqrt(0.5) - 1.0));
  CHECK(throws_kind([&] { bias_estimator(p1, p1 * -1.0); }, ErrorKind::NegativeInner));

  Matrix e1 = Matrix::Zero(3, 1);
  e1(0) = 1;
  CHECK(bias_estimator_from_bases(e1, u) == doctest::Approx(bias_estimator(p1, tilt)));
  CHECK_THROWS_AS(bias_estimator_from_bases(e1, Matrix::Zero(2, 1)), Error);
}

TEST_CASE("variance estimator") {
  CHECK(variance_estimator(-0.3, -0.3) == 0.0);
  CHECK(variance_estimator(-0.1, -0.2) == doctest::Approx(0.0289).epsilon(1e-12));
  CHECK(variance_estimator(-0.2, -0.1) == doctest::Approx(0.0289).epsilon(1e-12));
}

TEST_CASE("plug-in B̂_n") {
  std::vector<double> d(1000, 0.1);
  d[0] = 2.1;
  const double expect = 2.0 * std::sqrt(2.0) * (0.21 / 4.0) * std::sqrt(999.0);
  CHECK(b_hat_n(SymmetricOperator::diagonal(d), 1000) == doctest::Approx(expect).epsilon(1e-10));
  CHECK(b_hat_n_from_eigenvalues(2.1, 0.1, 1000) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(throws_kind([] { b_hat_n(diag({1, 1, 0.5}), 3); }, ErrorKind::DegenerateTopEigenvalues));
  CHECK(throws_kind([] { b_hat_n_from_eigenvalues(1.0, 1.0, 3); }, ErrorKind::DegenerateTopEigenvalues));
}

TEST_CASE("B̂_n is consistent when p/n is small") {
  ExperimentConfig cfg = spiked_config(single_spike(50, 2.0, 0.1), {100000}, 40, SeedSpec{5});
  cfg.observables = Observables::statistics();
  cfg.observables.bias = false;
  cfg.observables.plug_in = true;
  const Experiment exp(cfg);
  const ReplicationSet set = run_replications(exp, 100000);
  int within = 0;
  for (const auto& r : set.records) {
    REQUIRE(r.ok);
    if (std::abs(r.b_hat_n / exp.b_r() - 1.0) < 0.10) ++within;
  }
  CHECK(within >= 38);  // ≥ 95% of 40
}

TEST_CASE("normalized statistics") {
  CHECK(statistic_theory(0.2, -0.1, 3.0, 50) == doctest::Approx(0.0));
  CHECK(statistic_data_driven(0.2, -0.1, 3.0, 50) == doctest::Approx(0.0));
  const double s = statistic_theory(0.3, -0.1, 2.0, 100);
  CHECK(statistic_theory(0.3, -0.1, 4.0, 100) == doctest::Approx(s / 2.0));
  CHECK(statistic_data_driven(0.3, -0.1, 4.0, 100) == doctest::Approx(s / 2.0));
  CHECK(statistic_data_driven(0.3, -0.1, 2.0, 100) == statistic_theory(0.3, -0.1, 2.0, 100));
  CHECK(throws_kind([] { statistic_theory(0.1, 0.0, 0.0, 10); }, ErrorKind::NonpositiveB));
  CHECK(throws_kind([] { statistic_data_driven(0.1, 0.0, -1.0, 10); }, ErrorKind::NonpositiveB));
  CHECK(statistic_pure(0.2, -0.1, -0.3) == doctest::Approx(0.0));
  CHECK(statistic_pure(0.3, -0.1, -0.2) == doctest::Approx(0.1 / 0.17));
  CHECK(throws_kind([] { statistic_pure(0.3, -0.1, -0.1); }, ErrorKind::ZeroDenominator));
}
