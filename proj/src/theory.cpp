#include "specpert/theory.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "specpert/perturbation.hpp"

namespace specpert {

namespace {

void check_spike_index(const SpikedModel& model, std::size_t r) {
  if (r >= model.m()) {
    std::ostringstream os;
    os << "spike index " << r << " out of range (m = " << model.m() << ")";
    throw Error(ErrorKind::SpikeIndexOutOfRange, os.str());
  }
  if (model.p < model.m()) throw Error(ErrorKind::InvalidSpike, "p must be at least m");
}

}  // namespace

double a_r_operator(const SpectralStructure& ss, std::size_t r) {
  const Matrix& sigma = ss.source().matrix();
  const Matrix& pr = ss.projector(r).matrix();
  const Matrix c = partial_resolvent(ss, r).matrix();
  const double tr_p = (pr * sigma * pr).trace();
  const double tr_c = (c * sigma * c).trace();
  return 2.0 * tr_p * tr_c;
}

double a_r_eigensum(const SpectralStructure& ss, std::size_t r) {
  const double mu_r = ss.mu(r);
  const double m_r = static_cast<double>(ss.multiplicity(r));
  double sum = 0.0;
  for (std::size_t s = 0; s < ss.num_clusters(); ++s) {
    if (s == r) continue;
    const double d = ss.mu(s) - mu_r;
    sum += m_r * mu_r * static_cast<double>(ss.multiplicity(s)) * ss.mu(s) / (d * d);
  }
  return 2.0 * sum;
}

double b_r_operator(const SpectralStructure& ss, std::size_t r) {
  const Matrix& sigma = ss.source().matrix();
  const Matrix& pr = ss.projector(r).matrix();
  const Matrix c = partial_resolvent(ss, r).matrix();
  return 2.0 * std::numbers::sqrt2 * (pr * sigma * pr).norm() * (c * sigma * c).norm();
}

double b_r_eigensum(const SpectralStructure& ss, std::size_t r) {
  const double mu_r = ss.mu(r);
  const double m_r = static_cast<double>(ss.multiplicity(r));
  double sum = 0.0;
  for (std::size_t s = 0; s < ss.num_clusters(); ++s) {
    if (s == r) continue;
    const double d2 = (ss.mu(s) - mu_r) * (ss.mu(s) - mu_r);
    sum += m_r * mu_r * mu_r * static_cast<double>(ss.multiplicity(s)) * ss.mu(s) * ss.mu(s) / (d2 * d2);
  }
  return std::sqrt(8.0 * sum);
}

double a_r_spiked(const SpikedModel& model, std::size_t r) {
  check_spike_index(model, r);
  const double s2 = model.spike_variances[r];
  const double noise = model.noise_variance;
  double sum = static_cast<double>(model.p - model.m()) * (s2 + noise) * noise / (s2 * s2);
  for (std::size_t j = 0; j < model.m(); ++j) {
    if (j == r) continue;
    const double sj = model.spike_variances[j];
    sum += (sj + noise) * (s2 + noise) / ((s2 - sj) * (s2 - sj));
  }
  return 2.0 * sum;
}

double b_r_spiked(const SpikedModel& model, std::size_t r) {
  check_spike_index(model, r);
  const double s2 = model.spike_variances[r];
  const double noise = model.noise_variance;
  const double top = s2 + noise;
  double sum = top * top * noise * noise * static_cast<double>(model.p - model.m()) / std::pow(s2, 4);
  for (std::size_t j = 0; j < model.m(); ++j) {
    if (j == r) continue;
    const double sj = model.spike_variances[j];
    sum += top * top * (sj + noise) * (sj + noise) / std::pow(s2 - sj, 4);
  }
  return 2.0 * std::numbers::sqrt2 * std::sqrt(sum);
}

double b_r_spiked_asymptotic(const SpikedModel& model, std::size_t r) {
  check_spike_index(model, r);
  const double s2 = model.spike_variances[r];
  const double noise = model.noise_variance;
  return 2.0 * std::numbers::sqrt2 * (s2 + noise) * noise * std::sqrt(static_cast<double>(model.p)) / (s2 * s2);
}

double var_linear_exact(const SpectralStructure& ss, std::size_t r, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample size must be at least 1");
  const double a = a_r_eigensum(ss, r);
  const double b = b_r_eigensum(ss, r);
  const double m = static_cast<double>(ss.multiplicity(r));
  const double nn = static_cast<double>(n);
  return b * b / (nn * nn) * (1.0 + (m + 1.0) / nn) + 2.0 * a * a / (m * nn * nn * nn);
}

double birnbaum_risk(const SpikedModel& model, std::size_t n, std::size_t j) {
  if (model.noise_variance != 1.0) {
    throw Error(ErrorKind::RequiresUnitNoise, "the risk formula assumes unit noise variance");
  }
  check_spike_index(model, j);
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample size must be at least 1");
  const double nn = static_cast<double>(n);
  const double sj = model.spike_variances[j];
  double bracket = static_cast<double>(model.p - model.m()) * (1.0 + sj) / (nn * sj * sj);
  for (std::size_t k = 0; k < model.m(); ++k) {
    if (k == j) continue;
    const double sk = model.spike_variances[k];
    bracket += (1.0 + sj) * (1.0 + sk) / ((sj - sk) * (sj - sk)) / nn;
  }
  return bracket;
}

double risk_envelope_opnorm(const SymmetricOperator& sigma, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample size must be at least 1");
  const double norm = op_norm(sigma);
  if (norm == 0.0) return 0.0;
  const double ratio = trace(sigma) / norm / static_cast<double>(n);
  return norm * std::max(std::sqrt(ratio), ratio);
}

double risk_envelope_opnorm(const SpectralStructure& ss, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample size must be at least 1");
  const double ratio = ss.effective_rank() / static_cast<double>(n);
  return ss.op_norm() * std::max(std::sqrt(ratio), ratio);
}

TheoryConstants theory_constants(const SpectralStructure& ss, std::size_t r, std::size_t n) {
  TheoryConstants t;
  t.r = r;
  t.a_r = a_r_eigensum(ss, r);
  t.b_r = b_r_eigensum(ss, r);
  t.risk_approx = t.a_r / static_cast<double>(n);
  t.var_linear_exact = var_linear_exact(ss, r, n);
  t.effective_rank = ss.effective_rank();
  t.guarded_gap = ss.has_guarded_gap(r) ? ss.guarded_gap(r) : std::numeric_limits<double>::quiet_NaN();
  t.m_r = ss.multiplicity(r);
  return t;
}

double a_r_upper_bound(const SpectralStructure& ss, std::size_t r) {
  const double g = ss.guarded_gap(r);
  return 2.0 * static_cast<double>(ss.multiplicity(r)) * ss.mu(r) / (g * g) * ss.op_norm() *
         ss.effective_rank();
}

double a_r_lower_bound(const SpectralStructure& ss, std::size_t r) {
  const double m = static_cast<double>(ss.multiplicity(r));
  const double mu = ss.mu(r);
  const double norm = ss.op_norm();
  // m_r² μ_r²: with m_r μ_r² the bound fails for m_r ≥ 2 (e.g. diag(1, 1, ε, …)).
  return 2.0 * (m * mu / norm * ss.effective_rank() - m * m * mu * mu / (norm * norm));
}

}  // namespace specpert
