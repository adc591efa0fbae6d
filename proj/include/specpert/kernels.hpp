#pragma once

// Data-parallel kernels over an n x p observation matrix X, plus the serial
// reference implementations the tests compare against.
//
// The OpenMP versions split work on a fixed grid (row chunks for the
// matrix-vector kernel, column tiles for the Gram kernel) that does not
// depend on the thread count, and combine partial results in grid order.
// Their output is therefore bit-identical for any number of threads. When
// called from inside an active parallel region they run on the calling
// thread with the same grid.

#include <cstddef>

#include "specpert/linalg.hpp"

namespace specpert::kernels {

inline constexpr Eigen::Index kRowChunk = 1024;
inline constexpr Eigen::Index kColumnTile = 64;

// XᵀX / n.
Matrix gram(const RowMatrix& x);
Matrix gram_serial(const RowMatrix& x);

// Xᵀ(X v) / n without forming XᵀX.
Vector gram_apply(const RowMatrix& x, const Vector& v);
Vector gram_apply_serial(const RowMatrix& x, const Vector& v);

// Xᵀ(X W) / n for a thin block W (p x k).
Matrix gram_apply_block(const RowMatrix& x, const Matrix& w);

// X S for symmetric S (the sampling transform), parallel over row chunks.
RowMatrix right_multiply(const RowMatrix& x, const Matrix& s);
// X diag(d).
void scale_columns(RowMatrix& x, const Vector& d);

}  // namespace specpert::kernels
