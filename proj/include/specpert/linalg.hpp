#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "specpert/error.hpp"

namespace specpert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
// Observations stored one per row.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense real symmetric p x p operator. Immutable once built; the stored
// entries are exactly symmetric.
class SymmetricOperator {
 public:
  // Symmetrizes `raw` after checking that its asymmetry is within
  // 1e-12 * max(1, max|raw|).
  static SymmetricOperator from_matrix(const Matrix& raw);
  // Trusts the caller: `m` is symmetrized without a tolerance check. Used for
  // results of algebra on symmetric operands, where roundoff is the only
  // source of asymmetry.
  static SymmetricOperator from_trusted(Matrix m);

  static SymmetricOperator zero(std::size_t p);
  static SymmetricOperator identity(std::size_t p);
  static SymmetricOperator diagonal(std::span<const double> d);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  SymmetricOperator operator+(const SymmetricOperator& o) const;
  SymmetricOperator operator-(const SymmetricOperator& o) const;
  SymmetricOperator operator*(double a) const;

 private:
  explicit SymmetricOperator(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

struct EigenDecomposition {
  Vector eigenvalues;   // non-increasing
  Matrix eigenvectors;  // column j pairs with eigenvalues[j]
};

SymmetricOperator make_symmetric(const Matrix& raw);
SymmetricOperator make_symmetric(const std::vector<std::vector<double>>& rows);

// Full symmetric eigendecomposition, eigenvalues sorted non-increasing.
// Each eigenvector is signed so that its first component with magnitude
// above 1e-12 is positive.
EigenDecomposition eigh(const SymmetricOperator& a);
// Eigenvalues only, non-increasing.
Vector eigvalsh(const SymmetricOperator& a);

double op_norm(const SymmetricOperator& a);
double hs_norm(const SymmetricOperator& a);
double trace(const SymmetricOperator& a);
double hs_inner(const SymmetricOperator& a, const SymmetricOperator& b);

// Largest absolute entry; used for elementwise tolerance checks.
double max_abs(const Matrix& a);

// Sum of outer products of the given columns of v.
SymmetricOperator projector_from_columns(const Matrix& v, std::span<const std::size_t> cols);

// Operator norm of a (not necessarily symmetric) matrix: largest singular value.
double spectral_norm(const Matrix& a);

}  // namespace specpert
