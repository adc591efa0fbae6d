#pragma once

#include <cstddef>

#include "specpert/linalg.hpp"
#include "specpert/spectral_model.hpp"

namespace specpert {

// C_r = Σ_{s≠r} P_s / (μ_r − μ_s).
SymmetricOperator partial_resolvent(const SpectralStructure& ss, std::size_t r);

// L_r(E) = C_r E P_r + P_r E C_r.
SymmetricOperator linear_term(const SpectralStructure& ss, std::size_t r, const SymmetricOperator& e);

struct EmpiricalProjector {
  SymmetricOperator projector;
  Matrix basis;           // eigenvectors of Σ̂ at positions Δ_r, p x m_r
  double error_op_norm;   // ‖Σ̂ − Σ‖_∞
  bool separation_ok;     // ‖Σ̂ − Σ‖_∞ < ḡ_r / 2; false when ḡ_r is undefined
};

// P̂_r: projector onto the eigenvectors of Σ̂ sitting at the sorted positions Δ_r.
EmpiricalProjector empirical_projector(const SpectralStructure& ss, std::size_t r,
                                       const SymmetricOperator& sigma_hat);

struct PerturbationDecomposition {
  std::size_t r = 0;
  SymmetricOperator e = SymmetricOperator::zero(1);
  SymmetricOperator p_hat = SymmetricOperator::zero(1);
  SymmetricOperator linear = SymmetricOperator::zero(1);
  SymmetricOperator remainder = SymmetricOperator::zero(1);

  double e_op = 0.0;           // ‖E‖_∞
  double linear_hs = 0.0;      // ‖L_r(E)‖₂
  double remainder_op = 0.0;   // ‖S_r(E)‖_∞
  double proj_err_hs = 0.0;    // ‖P̂_r − P_r‖₂
  double proj_err_op = 0.0;    // ‖P̂_r − P_r‖_∞
  double guarded_gap = 0.0;    // ḡ_r, NaN when the cluster has no defined gap
  bool separation_ok = false;  // ‖E‖_∞ < ḡ_r / 2
  bool identifiable = false;   // ‖E‖_∞ < δ̄_r (diagnostic only)

  // Bounds that hold whenever separation_ok: ‖P̂−P‖_∞ ≤ 4‖E‖_∞/ḡ_r and
  // ‖S_r(E)‖_∞ ≤ 14(‖E‖_∞/ḡ_r)².
  double projector_bound() const { return 4.0 * e_op / guarded_gap; }
  double remainder_bound() const { return 14.0 * (e_op / guarded_gap) * (e_op / guarded_gap); }
};

// When ḡ_r is undefined the decomposition is still computed and
// separation_ok is false.
PerturbationDecomposition decompose(const SpectralStructure& ss, std::size_t r,
                                    const SymmetricOperator& sigma_hat);

}  // namespace specpert
