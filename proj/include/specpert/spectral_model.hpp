#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "specpert/linalg.hpp"

namespace specpert {

inline constexpr double kDefaultClusterTolerance = 1e-8;
inline constexpr double kDefaultRankTolerance = 1e-12;

// Distinct-eigenvalue structure of a covariance: Σ = Σ_r μ_r P_r.
// Clusters are 0-based here; cluster r holds the sorted-eigenvalue
// positions clusters[r].
class SpectralStructure {
 public:
  const SymmetricOperator& source() const { return source_; }
  const EigenDecomposition& eigen() const { return eigen_; }
  std::size_t dim() const { return source_.dim(); }
  std::size_t num_clusters() const { return mu_.size(); }

  double mu(std::size_t r) const;
  std::size_t multiplicity(std::size_t r) const;
  const std::vector<std::size_t>& cluster(std::size_t r) const;
  const std::vector<double>& distinct_eigenvalues() const { return mu_; }
  const SymmetricOperator& projector(std::size_t r) const;
  // Eigenvectors spanning the range of P_r, p x m_r.
  Matrix basis(std::size_t r) const;

  // g_r = μ_r − μ_{r+1}; GapUndefined for the last cluster.
  double gap(std::size_t r) const;
  // ḡ_r = min(g_{r−1}, g_r), ḡ_0 = g_0; GapUndefined when g_r is undefined.
  double guarded_gap(std::size_t r) const;
  bool has_guarded_gap(std::size_t r) const { return r + 1 < num_clusters(); }
  // δ̄_r = min_{s≤r} ḡ_s / 4.
  double identifiability_radius(std::size_t r) const;

  double cluster_tolerance() const { return cluster_tol_; }
  double op_norm() const { return op_norm_; }
  double trace() const { return trace_; }
  double effective_rank() const { return trace_ / op_norm_; }

  // Number of retained (non-negligible) eigenvalues.
  std::size_t retained() const { return retained_; }

  friend SpectralStructure spectral_structure(const SymmetricOperator&, double, double);

 private:
  SpectralStructure() = default;

  void check_cluster(std::size_t r) const;

  SymmetricOperator source_ = SymmetricOperator::zero(1);
  EigenDecomposition eigen_;
  std::vector<double> mu_;
  std::vector<std::vector<std::size_t>> clusters_;
  std::vector<SymmetricOperator> projectors_;
  double cluster_tol_ = kDefaultClusterTolerance;
  double op_norm_ = 0.0;
  double trace_ = 0.0;
  std::size_t retained_ = 0;
};

SpectralStructure spectral_structure(const SymmetricOperator& sigma,
                                     double cluster_tolerance = kDefaultClusterTolerance,
                                     double rank_tolerance = kDefaultRankTolerance);

double effective_rank(const SymmetricOperator& sigma);

// Σ = Σ_j s_j² θ_j θ_jᵀ + σ² I_p.
struct SpikedModel {
  std::size_t p = 0;
  std::vector<double> spike_variances;  // s_1² > … > s_m² > 0
  double noise_variance = 0.0;          // σ²
  // m orthonormal columns; empty means the canonical axes e_1..e_m.
  Matrix spike_directions;

  std::size_t m() const { return spike_variances.size(); }
  Matrix directions() const;
  void validate() const;
};

enum class SpikeVariant {
  // σ² P_p with P_p the identity on the simulated p-dimensional space.
  Projector,
  FullIdentity,
};

SymmetricOperator build_spiked(const SpikedModel& model,
                               SpikeVariant variant = SpikeVariant::FullIdentity);

// Single-spike model used throughout the experiments: s_1² θ θᵀ + σ² I_p, θ = e_1.
SpikedModel single_spike(std::size_t p, double spike_variance, double noise_variance);

}  // namespace specpert
