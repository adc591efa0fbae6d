#pragma once

#include <cstddef>

#include "specpert/linalg.hpp"
#include "specpert/spectral_model.hpp"

namespace specpert {

// Risk constant A_r(Σ) = 2 tr(P_r Σ P_r) tr(C_r Σ C_r), operator route.
double a_r_operator(const SpectralStructure& ss, std::size_t r);
// Same constant as 2 Σ_{s≠r} m_r μ_r m_s μ_s / (μ_s − μ_r)².
double a_r_eigensum(const SpectralStructure& ss, std::size_t r);

// Variance constant B_r(Σ) = 2√2 ‖P_r Σ P_r‖₂ ‖C_r Σ C_r‖₂, operator route.
double b_r_operator(const SpectralStructure& ss, std::size_t r);
// B_r² = 8 Σ_{s≠r} m_r μ_r² m_s μ_s² / (μ_s − μ_r)⁴.
double b_r_eigensum(const SpectralStructure& ss, std::size_t r);

// Spiked-model closed forms; r is the 0-based spike index. These are the
// values of the generic routes on build_spiked(model): the noise cluster
// contributes (p − m) σ² (resp. (p − m) σ⁴) terms.
double a_r_spiked(const SpikedModel& model, std::size_t r);
double b_r_spiked(const SpikedModel& model, std::size_t r);
// Large-p leading term 2√2 (s_r² + σ²) σ² √p / s_r⁴.
double b_r_spiked_asymptotic(const SpikedModel& model, std::size_t r);

// Var(‖L_r(E)‖₂²) = B_r²/n² (1 + (m_r+1)/n) + 2 A_r² / (m_r n³), exact for Gaussian data.
double var_linear_exact(const SpectralStructure& ss, std::size_t r, std::size_t n);

// Leading bracket of the asymptotic PCA risk E L(θ̂_j, θ_j) for unit noise,
// L(a, b) = 2(1 − |⟨a, b⟩|). The (1 + o(1)) factor is not included.
double birnbaum_risk(const SpikedModel& model, std::size_t n, std::size_t j);

// ‖Σ‖_∞ max(√(r(Σ)/n), r(Σ)/n): the operator-norm error rate without its constant.
double risk_envelope_opnorm(const SymmetricOperator& sigma, std::size_t n);
double risk_envelope_opnorm(const SpectralStructure& ss, std::size_t n);

struct TheoryConstants {
  std::size_t r = 0;
  double a_r = 0.0;
  double b_r = 0.0;
  double risk_approx = 0.0;       // A_r / n
  double var_linear_exact = 0.0;  // at sample size n
  double effective_rank = 0.0;
  double guarded_gap = 0.0;       // NaN when undefined
  std::size_t m_r = 0;
};

TheoryConstants theory_constants(const SpectralStructure& ss, std::size_t r, std::size_t n);

// A_r upper/lower bounds in terms of m_r, μ_r, ‖Σ‖_∞, r(Σ), ḡ_r.
double a_r_upper_bound(const SpectralStructure& ss, std::size_t r);
double a_r_lower_bound(const SpectralStructure& ss, std::size_t r);

}  // namespace specpert
