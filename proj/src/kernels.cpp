#include "specpert/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <vector>

namespace specpert::kernels {

namespace {

constexpr Eigen::Index kRowBlock = 32;  // rows kept hot in L2 by gram_apply

Eigen::Index num_chunks(Eigen::Index n, Eigen::Index chunk) { return (n + chunk - 1) / chunk; }

void require_rows(const RowMatrix& x) {
  if (x.rows() == 0) throw Error(ErrorKind::EmptyBatch, "observation matrix has no rows");
}

// Xᵀ(X v) restricted to rows [begin, end), accumulated into y.
void fused_chunk(const RowMatrix& x, const Vector& v, Eigen::Index begin, Eigen::Index end, Vector& y) {
  Vector t(kRowBlock);
  for (Eigen::Index r0 = begin; r0 < end; r0 += kRowBlock) {
    const Eigen::Index rows = std::min(kRowBlock, end - r0);
    const auto block = x.middleRows(r0, rows);
    t.head(rows).noalias() = block * v;
    y.noalias() += block.transpose() * t.head(rows);
  }
}

}  // namespace

Matrix gram(const RowMatrix& x) {
  require_rows(x);
  const Eigen::Index p = x.cols();
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  Matrix g(p, p);
  const Eigen::Index tiles = num_chunks(p, kColumnTile);
#pragma omp parallel for schedule(dynamic) if (!omp_in_parallel())
  for (Eigen::Index t = 0; t < tiles; ++t) {
    const Eigen::Index j0 = t * kColumnTile;
    const Eigen::Index w = std::min(kColumnTile, p - j0);
    // Upper-triangular band: rows [0, j0 + w) of columns [j0, j0 + w).
    g.block(0, j0, j0 + w, w).noalias() = x.leftCols(j0 + w).transpose() * x.middleCols(j0, w);
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = j + 1; i < p; ++i) g(i, j) = g(j, i);
  }
  g *= inv_n;
  return g;
}

Matrix gram_serial(const RowMatrix& x) {
  require_rows(x);
  Matrix g = x.transpose() * x;
  g /= static_cast<double>(x.rows());
  return 0.5 * (g + g.transpose());
}

Vector gram_apply(const RowMatrix& x, const Vector& v) {
  require_rows(x);
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  const Eigen::Index chunks = num_chunks(n, kRowChunk);
  if (chunks == 1) {
    Vector y = Vector::Zero(p);
    fused_chunk(x, v, 0, n, y);
    return y / static_cast<double>(n);
  }
  std::vector<Vector> partial(static_cast<std::size_t>(chunks), Vector::Zero(p));
#pragma omp parallel for schedule(static) if (!omp_in_parallel())
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index begin = c * kRowChunk;
    fused_chunk(x, v, begin, std::min(n, begin + kRowChunk), partial[static_cast<std::size_t>(c)]);
  }
  Vector y = partial[0];
  for (std::size_t c = 1; c < partial.size(); ++c) y += partial[c];
  return y / static_cast<double>(n);
}

Vector gram_apply_serial(const RowMatrix& x, const Vector& v) {
  require_rows(x);
  const Vector xv = x * v;
  return x.transpose() * xv / static_cast<double>(x.rows());
}

Matrix gram_apply_block(const RowMatrix& x, const Matrix& w) {
  require_rows(x);
  const Eigen::Index n = x.rows();
  const Eigen::Index chunks = num_chunks(n, kRowChunk);
  std::vector<Matrix> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static) if (!omp_in_parallel())
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index begin = c * kRowChunk;
    const auto rows = x.middleRows(begin, std::min(kRowChunk, n - begin));
    const Matrix xw = rows * w;
    partial[static_cast<std::size_t>(c)] = rows.transpose() * xw;
  }
  Matrix y = partial[0];
  for (std::size_t c = 1; c < partial.size(); ++c) y += partial[c];
  return y / static_cast<double>(n);
}

RowMatrix right_multiply(const RowMatrix& x, const Matrix& s) {
  const Eigen::Index n = x.rows();
  RowMatrix out(n, s.cols());
  const Eigen::Index chunks = num_chunks(n, kRowChunk);
#pragma omp parallel for schedule(static) if (!omp_in_parallel())
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index begin = c * kRowChunk;
    const Eigen::Index rows = std::min(kRowChunk, n - begin);
    out.middleRows(begin, rows).noalias() = x.middleRows(begin, rows) * s;
  }
  return out;
}

void scale_columns(RowMatrix& x, const Vector& d) {
  const Eigen::Index n = x.rows();
#pragma omp parallel for schedule(static) if (!omp_in_parallel())
  for (Eigen::Index i = 0; i < n; ++i) x.row(i).array() *= d.transpose().array();
}

}  // namespace specpert::kernels
