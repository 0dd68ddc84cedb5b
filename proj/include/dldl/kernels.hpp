#pragma once

#include "dldl/matrix.hpp"

namespace dldl {

// Dense products and pairwise distances. The default entry points are
// OpenMP-parallel over output rows; every output entry is accumulated
// serially in ascending index order by a single thread, so results are
// bitwise identical to the serial reference for any thread count.

Matrix multiply(const Matrix& a, const Matrix& b);     // a * b
Matrix multiply_tn(const Matrix& a, const Matrix& b);  // a^T * b
Matrix multiply_nt(const Matrix& a, const Matrix& b);  // a * b^T

// points is dim x n, one point per column; returns the n x n matrix of
// squared Euclidean distances.
Matrix pairwise_squared_distances(const Matrix& points);

// Single-threaded reference implementations, kept for tests and the
// kernel benchmark.
namespace serial {
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix multiply_tn(const Matrix& a, const Matrix& b);
Matrix multiply_nt(const Matrix& a, const Matrix& b);
Matrix pairwise_squared_distances(const Matrix& points);
}  // namespace serial

}  // namespace dldl
