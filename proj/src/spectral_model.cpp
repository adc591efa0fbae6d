#include "specpert/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace specpert {

void SpectralStructure::check_cluster(std::size_t r) const {
  if (r >= mu_.size()) {
    std::ostringstream os;
    os << "cluster index " << r << " out of range (" << mu_.size() << " clusters)";
    throw Error(ErrorKind::InvalidCluster, os.str());
  }
}

double SpectralStructure::mu(std::size_t r) const {
  check_cluster(r);
  return mu_[r];
}

std::size_t SpectralStructure::multiplicity(std::size_t r) const {
  check_cluster(r);
  return clusters_[r].size();
}

const std::vector<std::size_t>& SpectralStructure::cluster(std::size_t r) const {
  check_cluster(r);
  return clusters_[r];
}

const SymmetricOperator& SpectralStructure::projector(std::size_t r) const {
  check_cluster(r);
  return projectors_[r];
}

Matrix SpectralStructure::basis(std::size_t r) const {
  check_cluster(r);
  const auto& idx = clusters_[r];
  Matrix v(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    v.col(static_cast<Eigen::Index>(k)) = eigen_.eigenvectors.col(static_cast<Eigen::Index>(idx[k]));
  }
  return v;
}

double SpectralStructure::gap(std::size_t r) const {
  check_cluster(r);
  if (r + 1 >= mu_.size()) {
    std::ostringstream os;
    os << "cluster " << r << " is the smallest distinct eigenvalue; its gap is undefined";
    throw Error(ErrorKind::GapUndefined, os.str());
  }
  return mu_[r] - mu_[r + 1];
}

double SpectralStructure::guarded_gap(std::size_t r) const {
  const double g = gap(r);
  return r == 0 ? g : std::min(gap(r - 1), g);
}

double SpectralStructure::identifiability_radius(std::size_t r) const {
  double m = guarded_gap(0);
  for (std::size_t s = 1; s <= r; ++s) m = std::min(m, guarded_gap(s));
  return m / 4.0;
}

SpectralStructure spectral_structure(const SymmetricOperator& sigma, double cluster_tolerance,
                                     double rank_tolerance) {
  if (!(cluster_tolerance >= 0.0) || !(rank_tolerance >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be non-negative");
  }
  SpectralStructure ss;
  ss.source_ = sigma;
  ss.eigen_ = eigh(sigma);
  ss.cluster_tol_ = cluster_tolerance;
  const Vector& ev = ss.eigen_.eigenvalues;
  const Eigen::Index p = ev.size();
  const double norm = std::max(std::abs(ev(0)), std::abs(ev(p - 1)));
  ss.op_norm_ = norm;
  ss.trace_ = sigma.matrix().trace();

  const double drop = rank_tolerance * norm;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (ev(i) < -drop) {
      std::ostringstream os;
      os << "eigenvalue " << ev(i) << " below -" << drop << "; not a covariance";
      throw Error(ErrorKind::NegativeEigenvalue, os.str());
    }
  }

  std::size_t kept = 0;
  while (kept < static_cast<std::size_t>(p) && ev(static_cast<Eigen::Index>(kept)) > drop) ++kept;
  if (kept == 0 || norm == 0.0) throw Error(ErrorKind::EmptySpectrum, "all eigenvalues are negligible");
  ss.retained_ = kept;

  const double join = cluster_tolerance * norm;
  for (std::size_t i = 0; i < kept; ++i) {
    const double v = ev(static_cast<Eigen::Index>(i));
    if (!ss.clusters_.empty() && ev(static_cast<Eigen::Index>(ss.clusters_.back().back())) - v <= join) {
      ss.clusters_.back().push_back(i);
    } else {
      ss.clusters_.push_back({i});
    }
  }
  for (const auto& c : ss.clusters_) {
    double sum = 0.0;
    for (auto i : c) sum += ev(static_cast<Eigen::Index>(i));
    ss.mu_.push_back(sum / static_cast<double>(c.size()));
    ss.projectors_.push_back(projector_from_columns(ss.eigen_.eigenvectors, c));
  }
  return ss;
}

double effective_rank(const SymmetricOperator& sigma) {
  const double norm = op_norm(sigma);
  if (norm == 0.0) throw Error(ErrorKind::ZeroOperator, "effective rank of the zero operator");
  return trace(sigma) / norm;
}

Matrix SpikedModel::directions() const {
  const auto pp = static_cast<Eigen::Index>(p);
  const auto mm = static_cast<Eigen::Index>(m());
  if (spike_directions.size() == 0) return Matrix::Identity(pp, mm);
  return spike_directions;
}

void SpikedModel::validate() const {
  if (m() == 0) throw Error(ErrorKind::InvalidSpike, "at least one spike is required");
  if (p <= m()) throw Error(ErrorKind::InvalidSpike, "ambient dimension must exceed the number of spikes");
  for (std::size_t j = 0; j < m(); ++j) {
    if (!(spike_variances[j] > 0.0)) throw Error(ErrorKind::InvalidSpike, "spike variances must be positive");
    if (j > 0 && !(spike_variances[j] < spike_variances[j - 1])) {
      throw Error(ErrorKind::InvalidSpike, "spike variances must be strictly decreasing");
    }
  }
  if (!(noise_variance >= 0.0)) throw Error(ErrorKind::InvalidSpike, "noise variance must be non-negative");
  if (spike_directions.size() != 0) {
    if (spike_directions.rows() != static_cast<Eigen::Index>(p) ||
        spike_directions.cols() != static_cast<Eigen::Index>(m())) {
      throw Error(ErrorKind::DimensionMismatch, "spike directions must be p x m");
    }
    const Matrix gram = spike_directions.transpose() * spike_directions;
    const auto mm = static_cast<Eigen::Index>(m());
    if (max_abs(gram - Matrix::Identity(mm, mm)) > 1e-12) {
      throw Error(ErrorKind::InvalidSpike, "spike directions are not orthonormal");
    }
  }
}

SymmetricOperator build_spiked(const SpikedModel& model, SpikeVariant /*variant*/) {
  // Both variants coincide in a finite simulation: P_p is the identity on R^p.
  model.validate();
  const Matrix theta = model.directions();
  const auto pp = static_cast<Eigen::Index>(model.p);
  Matrix sigma = model.noise_variance * Matrix::Identity(pp, pp);
  for (std::size_t j = 0; j < model.m(); ++j) {
    const auto col = theta.col(static_cast<Eigen::Index>(j));
    sigma.noalias() += model.spike_variances[j] * col * col.transpose();
  }
  return SymmetricOperator::from_trusted(std::move(sigma));
}

SpikedModel single_spike(std::size_t p, double spike_variance, double noise_variance) {
  SpikedModel m;
  m.p = p;
  m.spike_variances = {spike_variance};
  m.noise_variance = noise_variance;
  return m;
}

}  // namespace specpert
