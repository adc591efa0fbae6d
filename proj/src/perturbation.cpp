#include "specpert/perturbation.hpp"

#include <cmath>
#include <limits>

namespace specpert {

namespace {

double guarded_gap_or_nan(const SpectralStructure& ss, std::size_t r) {
  return ss.has_guarded_gap(r) ? ss.guarded_gap(r) : std::numeric_limits<double>::quiet_NaN();
}

void require_dim(const SpectralStructure& ss, const SymmetricOperator& a) {
  if (a.dim() != ss.dim()) throw Error(ErrorKind::DimensionMismatch, "operator and covariance dimensions differ");
}

}  // namespace

SymmetricOperator partial_resolvent(const SpectralStructure& ss, std::size_t r) {
  const double mu_r = ss.mu(r);
  const auto p = static_cast<Eigen::Index>(ss.dim());
  Matrix c = Matrix::Zero(p, p);
  for (std::size_t s = 0; s < ss.num_clusters(); ++s) {
    if (s == r) continue;
    c += ss.projector(s).matrix() / (mu_r - ss.mu(s));
  }
  return SymmetricOperator::from_trusted(std::move(c));
}

SymmetricOperator linear_term(const SpectralStructure& ss, std::size_t r, const SymmetricOperator& e) {
  require_dim(ss, e);
  const Matrix c = partial_resolvent(ss, r).matrix();
  const Matrix& pr = ss.projector(r).matrix();
  const Matrix cep = c * e.matrix() * pr;
  return SymmetricOperator::from_trusted(cep + cep.transpose());
}

EmpiricalProjector empirical_projector(const SpectralStructure& ss, std::size_t r,
                                       const SymmetricOperator& sigma_hat) {
  require_dim(ss, sigma_hat);
  const auto& idx = ss.cluster(r);
  const EigenDecomposition dec = eigh(sigma_hat);
  Matrix u(static_cast<Eigen::Index>(ss.dim()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    u.col(static_cast<Eigen::Index>(k)) = dec.eigenvectors.col(static_cast<Eigen::Index>(idx[k]));
  }
  const double e_op = op_norm(sigma_hat - ss.source());
  const double g = guarded_gap_or_nan(ss, r);
  return EmpiricalProjector{SymmetricOperator::from_trusted(u * u.transpose()), u, e_op,
                            std::isfinite(g) && e_op < g / 2.0};
}

PerturbationDecomposition decompose(const SpectralStructure& ss, std::size_t r,
                                    const SymmetricOperator& sigma_hat) {
  EmpiricalProjector ep = empirical_projector(ss, r, sigma_hat);
  PerturbationDecomposition d;
  d.r = r;
  d.e = sigma_hat - ss.source();
  d.p_hat = ep.projector;
  d.linear = linear_term(ss, r, d.e);
  const SymmetricOperator diff = d.p_hat - ss.projector(r);
  d.remainder = diff - d.linear;

  d.e_op = ep.error_op_norm;
  d.linear_hs = hs_norm(d.linear);
  d.remainder_op = op_norm(d.remainder);
  d.proj_err_hs = hs_norm(diff);
  d.proj_err_op = op_norm(diff);
  d.guarded_gap = guarded_gap_or_nan(ss, r);
  d.separation_ok = ep.separation_ok;
  d.identifiable = std::isfinite(d.guarded_gap) && d.e_op < ss.identifiability_radius(r);
  return d;
}

}  // namespace specpert
