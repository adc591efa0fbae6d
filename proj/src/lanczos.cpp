#include "specpert/lanczos.hpp"

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace specpert {

namespace {

struct RitzSystem {
  Vector values;   // ascending, as returned by the tridiagonal solver
  Matrix vectors;  // j x j
};

RitzSystem ritz(const std::vector<double>& alpha, const std::vector<double>& beta, Eigen::Index j) {
  Vector diag(j), sub(std::max<Eigen::Index>(j - 1, 1));
  for (Eigen::Index i = 0; i < j; ++i) diag(i) = alpha[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < j; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
  if (j == 1) return {diag, Matrix::Ones(1, 1)};
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.computeFromTridiagonal(diag, sub.head(j - 1), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "tridiagonal eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Runs Lanczos until `accept(ritz, coupling, j)` returns true or the space is
// exhausted. Returns the basis (first j columns valid) and the final size.
template <class Accept>
std::pair<Matrix, Eigen::Index> run_lanczos(const LinearOperator& apply, Eigen::Index p,
                                            const LanczosOptions& opt, std::vector<double>& alpha,
                                            std::vector<double>& beta, bool& converged, Accept accept) {
  const Eigen::Index cap = std::min<Eigen::Index>(p, static_cast<Eigen::Index>(opt.max_iterations));
  Matrix q(p, cap);
  std::mt19937_64 gen(opt.start_seed);
  boost::random::normal_distribution<double> normal;

  auto fresh = [&](Eigen::Index j) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      Vector v(p);
      for (Eigen::Index i = 0; i < p; ++i) v(i) = normal(gen);
      for (int pass = 0; pass < 2 && j > 0; ++pass) {
        v -= q.leftCols(j) * (q.leftCols(j).transpose() * v);
      }
      const double nv = v.norm();
      if (nv > 1e-8) {
        q.col(j) = v / nv;
        return true;
      }
    }
    return false;
  };

  converged = false;
  if (!fresh(0)) return {q, 0};
  double scale = 0.0;
  Eigen::Index j = 0;
  while (j < cap) {
    Vector w = apply(q.col(j));
    const double a = q.col(j).dot(w);
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
    }
    const double b = w.norm();
    ++j;
    scale = std::max({scale, std::abs(a), b});
    const bool breakdown = b <= 1e-13 * std::max(scale, 1e-300);
    if (j == p) {
      converged = true;
      break;
    }
    const bool check_now = j < 40 || j % 4 == 0 || breakdown || j == cap;
    if (check_now && accept(ritz(alpha, beta, j), breakdown ? 0.0 : b, j)) {
      converged = true;
      break;
    }
    if (j == cap) break;
    if (breakdown) {
      beta.push_back(0.0);
      if (!fresh(j)) break;
    } else {
      beta.push_back(b);
      q.col(j) = w / b;
    }
  }
  return {q, j};
}

}  // namespace

TopEigenpairs top_eigenpairs(const LinearOperator& apply, Eigen::Index p, std::size_t k,
                             const LanczosOptions& options) {
  if (k == 0 || static_cast<Eigen::Index>(k) > p) {
    throw Error(ErrorKind::InvalidArgument, "requested eigenpair count out of range");
  }
  std::vector<double> alpha, beta;
  bool converged = false;
  const auto kk = static_cast<Eigen::Index>(k);
  const auto nvec = options.vector_count == 0 ? kk : static_cast<Eigen::Index>(options.vector_count);
  const double value_tol = std::sqrt(options.tolerance);
  auto accept = [&](const RitzSystem& rs, double coupling, Eigen::Index j) {
    if (j < kk) return false;
    const double top = std::max(std::abs(rs.values(j - 1)), std::abs(rs.values(0)));
    for (Eigen::Index i = 0; i < kk; ++i) {
      const Eigen::Index idx = j - 1 - i;
      const double tol = i < nvec ? options.tolerance : value_tol;
      if (std::abs(coupling * rs.vectors(j - 1, idx)) > tol * top) return false;
    }
    return true;
  };
  auto [q, j] = run_lanczos(apply, p, options, alpha, beta, converged, accept);
  if (j < kk) throw Error(ErrorKind::ConvergenceFailure, "Krylov space smaller than requested rank");
  const RitzSystem rs = ritz(alpha, beta, j);

  TopEigenpairs out;
  out.values.resize(kk);
  out.vectors.resize(p, kk);
  for (Eigen::Index i = 0; i < kk; ++i) {
    const Eigen::Index idx = j - 1 - i;
    out.values(i) = rs.values(idx);
    Vector v = q.leftCols(j) * rs.vectors.col(idx);
    v.normalize();
    for (Eigen::Index c = 0; c < p; ++c) {
      if (std::abs(v(c)) > 1e-12) {
        if (v(c) < 0) v = -v;
        break;
      }
    }
    out.vectors.col(i) = v;
  }
  out.iterations = static_cast<std::size_t>(j);
  out.converged = converged;
  return out;
}

double ExtremeEigenvalues::op_norm() const { return std::max(std::abs(largest), std::abs(smallest)); }

ExtremeEigenvalues extreme_eigenvalues(const LinearOperator& apply, Eigen::Index p,
                                       const LanczosOptions& options) {
  std::vector<double> alpha, beta;
  bool converged = false;
  auto accept = [&](const RitzSystem& rs, double coupling, Eigen::Index j) {
    if (j < 2) return coupling == 0.0;
    const double top = std::max(std::abs(rs.values(j - 1)), std::abs(rs.values(0)));
    return std::abs(coupling * rs.vectors(j - 1, j - 1)) <= options.tolerance * top &&
           std::abs(coupling * rs.vectors(j - 1, 0)) <= options.tolerance * top;
  };
  auto [q, j] = run_lanczos(apply, p, options, alpha, beta, converged, accept);
  if (j == 0) return {0.0, 0.0, 0, true};
  const RitzSystem rs = ritz(alpha, beta, j);
  return {rs.values(j - 1), rs.values(0), static_cast<std::size_t>(j), converged};
}

}  // namespace specpert
