#pragma once

#include <random>

#include "specpert/linalg.hpp"

namespace testing {

inline specpert::Matrix random_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> z;
  specpert::Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = z(gen);
  return m;
}

inline specpert::Matrix random_orthogonal(std::mt19937_64& gen, Eigen::Index p) {
  Eigen::HouseholderQR<specpert::Matrix> qr(random_matrix(gen, p, p));
  return qr.householderQ();
}

inline specpert::SymmetricOperator random_symmetric(std::mt19937_64& gen, Eigen::Index p) {
  const specpert::Matrix a = random_matrix(gen, p, p);
  return specpert::SymmetricOperator::from_trusted((a + a.transpose()) / 2.0);
}

// Q diag(values) Qᵀ with a random orthogonal Q.
inline specpert::SymmetricOperator with_spectrum(std::mt19937_64& gen, const specpert::Vector& values) {
  const specpert::Matrix q = random_orthogonal(gen, values.size());
  return specpert::SymmetricOperator::from_trusted(q * values.asDiagonal() * q.transpose());
}

}  // namespace testing
