#pragma once

#include <cstddef>

#include "specpert/linalg.hpp"
#include "specpert/sampling.hpp"

namespace specpert {

// Σ̂ = (1/n) Σ X_i X_iᵀ. The model is mean-zero, so there is no centering
// unless `center` is set (for external data only).
SymmetricOperator sample_covariance(const SampleBatch& batch, bool center = false);

// b̂ = √⟨P_a, P_b⟩ − 1 for two independent empirical projectors.
double bias_estimator(const SymmetricOperator& p_a, const SymmetricOperator& p_b);
// Same statistic from orthonormal bases: ⟨U_a U_aᵀ, U_b U_bᵀ⟩ = ‖U_aᵀ U_b‖_F².
double bias_estimator_from_bases(const Matrix& u_a, const Matrix& u_b);

// Ṽ_n = ((1 + b̂)² − (1 + b̃)²)².
double variance_estimator(double b_hat, double b_tilde);

// B̂_n = 2√2 μ̂₁ μ̂₂ / (μ̂₁ − μ̂₂)² √(p − 1) from the two largest eigenvalues of Σ̂.
double b_hat_n(const SymmetricOperator& sigma_hat, std::size_t p);
double b_hat_n_from_eigenvalues(double mu1, double mu2, std::size_t p);

// (n / B_n)(‖P̂ − P‖₂² + 2b̂).
double statistic_theory(double hs_sq_err, double b_hat, double b_n, std::size_t n);
// (n / B̂_n)(‖P̂ − P‖₂² + 2b̂).
double statistic_data_driven(double hs_sq_err, double b_hat, double b_hat_n, std::size_t n);
// (‖P̂ − P‖₂² + 2b̂) / |(1 + b̂)² − (1 + b̃)²|.
double statistic_pure(double hs_sq_err, double b_hat, double b_tilde);

}  // namespace specpert
