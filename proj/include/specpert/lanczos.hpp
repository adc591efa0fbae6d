#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "specpert/linalg.hpp"

namespace specpert {

// y = A v for a symmetric p x p operator A.
using LinearOperator = std::function<Vector(const Vector&)>;

struct LanczosOptions {
  // Converged when every requested Ritz pair has residual ‖Av − θv‖ below
  // tolerance * max|θ|.
  double tolerance = 1e-10;
  // When nonzero, only the first `vector_count` pairs need the residual test
  // above; the remaining requested pairs are wanted for their values only and
  // stop at residual √tolerance * max|θ| (value error is quadratic in it).
  std::size_t vector_count = 0;
  std::size_t max_iterations = 400;
  std::uint64_t start_seed = 0x9e3779b97f4a7c15ULL;
};

struct TopEigenpairs {
  Vector values;   // k largest eigenvalues, non-increasing
  Matrix vectors;  // p x k
  std::size_t iterations = 0;
  bool converged = false;
};

// k largest eigenpairs by Lanczos with full reorthogonalization. A breakdown
// (invariant Krylov subspace) before convergence restarts from a fresh vector
// orthogonal to the basis. Single-vector Lanczos sees one direction per
// exactly repeated eigenvalue, so callers needing exact multiplicities must
// use the dense eigh; sample covariances of continuous data have simple
// nonzero spectra almost surely.
TopEigenpairs top_eigenpairs(const LinearOperator& apply, Eigen::Index p, std::size_t k,
                             const LanczosOptions& options = {});

struct ExtremeEigenvalues {
  double largest = 0.0;
  double smallest = 0.0;
  std::size_t iterations = 0;
  bool converged = false;

  double op_norm() const;
};

ExtremeEigenvalues extreme_eigenvalues(const LinearOperator& apply, Eigen::Index p,
                                       const LanczosOptions& options = {});

}  // namespace specpert
