#include "specpert/estimators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "specpert/kernels.hpp"

namespace specpert {

SymmetricOperator sample_covariance(const SampleBatch& batch, bool center) {
  if (batch.n() == 0) throw Error(ErrorKind::EmptyBatch, "cannot form a covariance from zero observations");
  if (!center) return SymmetricOperator::from_trusted(kernels::gram(batch.vectors));
  RowMatrix centered = batch.vectors.rowwise() - batch.vectors.colwise().mean();
  return SymmetricOperator::from_trusted(kernels::gram(centered));
}

namespace {

double bias_from_inner(double inner) {
  if (inner < 0.0) {
    // Roundoff can push an exact zero slightly negative.
    if (inner > -1e-12) return -1.0;
    std::ostringstream os;
    os << "projector inner product " << inner << " is negative";
    throw Error(ErrorKind::NegativeInner, os.str());
  }
  return std::sqrt(inner) - 1.0;
}

}  // namespace

double bias_estimator(const SymmetricOperator& p_a, const SymmetricOperator& p_b) {
  return bias_from_inner(hs_inner(p_a, p_b));
}

double bias_estimator_from_bases(const Matrix& u_a, const Matrix& u_b) {
  if (u_a.rows() != u_b.rows()) throw Error(ErrorKind::DimensionMismatch, "bases live in different dimensions");
  return bias_from_inner((u_a.transpose() * u_b).squaredNorm());
}

double variance_estimator(double b_hat, double b_tilde) {
  const double d = (b_hat - b_tilde) * (2.0 + b_hat + b_tilde);
  return d * d;
}

double b_hat_n_from_eigenvalues(double mu1, double mu2, std::size_t p) {
  if (!(mu1 - mu2 > 1e-12 * std::abs(mu1))) {
    std::ostringstream os;
    os << "top eigenvalues " << mu1 << " and " << mu2 << " are not separated";
    throw Error(ErrorKind::DegenerateTopEigenvalues, os.str());
  }
  if (p < 2) throw Error(ErrorKind::InvalidArgument, "B̂_n needs p ≥ 2");
  const double d = mu1 - mu2;
  return 2.0 * std::numbers::sqrt2 * mu1 * mu2 / (d * d) * std::sqrt(static_cast<double>(p - 1));
}

double b_hat_n(const SymmetricOperator& sigma_hat, std::size_t p) {
  const Vector ev = eigvalsh(sigma_hat);
  if (ev.size() < 2) throw Error(ErrorKind::InvalidArgument, "B̂_n needs at least two eigenvalues");
  return b_hat_n_from_eigenvalues(ev(0), ev(1), p);
}

namespace {

double normalized(double hs_sq_err, double b_hat, double b, std::size_t n) {
  if (!(b > 0.0)) throw Error(ErrorKind::NonpositiveB, "normalizing constant must be positive");
  return static_cast<double>(n) / b * (hs_sq_err + 2.0 * b_hat);
}

}  // namespace

double statistic_theory(double hs_sq_err, double b_hat, double b_n, std::size_t n) {
  return normalized(hs_sq_err, b_hat, b_n, n);
}

double statistic_data_driven(double hs_sq_err, double b_hat, double b_hat_n, std::size_t n) {
  return normalized(hs_sq_err, b_hat, b_hat_n, n);
}

double statistic_pure(double hs_sq_err, double b_hat, double b_tilde) {
  const double denom = std::abs((b_hat - b_tilde) * (2.0 + b_hat + b_tilde));
  if (denom == 0.0) throw Error(ErrorKind::ZeroDenominator, "b̂ and b̃ coincide");
  return (hs_sq_err + 2.0 * b_hat) / denom;
}

}  // namespace specpert
