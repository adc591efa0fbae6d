#include "specpert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace specpert {

namespace {

void require_same_dim(const SymmetricOperator& a, const SymmetricOperator& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "operator dimensions " << a.dim() << " and " << b.dim() << " differ";
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

}  // namespace

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

SymmetricOperator SymmetricOperator::from_matrix(const Matrix& raw) {
  if (raw.rows() != raw.cols()) {
    std::ostringstream os;
    os << "matrix is " << raw.rows() << "x" << raw.cols();
    throw Error(ErrorKind::NonSquare, os.str());
  }
  if (raw.rows() == 0) throw Error(ErrorKind::InvalidArgument, "dimension must be at least 1");
  if (!raw.allFinite()) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  const double scale = std::max(1.0, max_abs(raw));
  const double asym = max_abs(raw - raw.transpose());
  if (asym > 1e-12 * scale) {
    std::ostringstream os;
    os << "max asymmetry " << asym << " exceeds tolerance " << 1e-12 * scale;
    throw Error(ErrorKind::AsymmetricInput, os.str());
  }
  return from_trusted(raw);
}

SymmetricOperator SymmetricOperator::from_trusted(Matrix m) {
  Matrix sym = 0.5 * (m + m.transpose());
  return SymmetricOperator(std::move(sym));
}

SymmetricOperator SymmetricOperator::zero(std::size_t p) {
  const auto n = static_cast<Eigen::Index>(p);
  return SymmetricOperator(Matrix::Zero(n, n));
}

SymmetricOperator SymmetricOperator::identity(std::size_t p) {
  const auto n = static_cast<Eigen::Index>(p);
  return SymmetricOperator(Matrix::Identity(n, n));
}

SymmetricOperator SymmetricOperator::diagonal(std::span<const double> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) v(static_cast<Eigen::Index>(i)) = d[i];
  return SymmetricOperator(v.asDiagonal().toDenseMatrix());
}

SymmetricOperator SymmetricOperator::operator+(const SymmetricOperator& o) const {
  require_same_dim(*this, o);
  return SymmetricOperator(m_ + o.m_);
}

SymmetricOperator SymmetricOperator::operator-(const SymmetricOperator& o) const {
  require_same_dim(*this, o);
  return SymmetricOperator(m_ - o.m_);
}

SymmetricOperator SymmetricOperator::operator*(double a) const { return SymmetricOperator(a * m_); }

SymmetricOperator make_symmetric(const Matrix& raw) { return SymmetricOperator::from_matrix(raw); }

SymmetricOperator make_symmetric(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != n) {
      std::ostringstream os;
      os << "row " << i << " has " << row.size() << " entries, expected " << n;
      throw Error(ErrorKind::NonSquare, os.str());
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  return SymmetricOperator::from_matrix(m);
}

EigenDecomposition eigh(const SymmetricOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "symmetric eigensolver did not converge");
  }
  const Eigen::Index p = a.matrix().rows();
  EigenDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index j = 0; j < p; ++j) {
    auto col = out.eigenvectors.col(j);
    for (Eigen::Index i = 0; i < p; ++i) {
      if (std::abs(col(i)) > 1e-12) {
        if (col(i) < 0) col *= -1.0;
        break;
      }
    }
  }
  return out;
}

Vector eigvalsh(const SymmetricOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "symmetric eigensolver did not converge");
  }
  return solver.eigenvalues().reverse();
}

double op_norm(const SymmetricOperator& a) {
  const Vector ev = eigvalsh(a);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double hs_norm(const SymmetricOperator& a) { return a.matrix().norm(); }

double trace(const SymmetricOperator& a) { return a.matrix().trace(); }

double hs_inner(const SymmetricOperator& a, const SymmetricOperator& b) {
  require_same_dim(a, b);
  return a.matrix().cwiseProduct(b.matrix()).sum();
}

SymmetricOperator projector_from_columns(const Matrix& v, std::span<const std::size_t> cols) {
  Matrix u(v.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    u.col(static_cast<Eigen::Index>(k)) = v.col(static_cast<Eigen::Index>(cols[k]));
  }
  return SymmetricOperator::from_trusted(u * u.transpose());
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace specpert
