#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dldl/errors.hpp"

namespace dldl {

// Norms at or below this are treated as degenerate (zero columns, dead atoms).
inline constexpr double kEpsilonNorm = 1e-12;

// Dense row-major matrix of doubles. Shapes are always at least 1x1 and
// values coming from outside the library are checked to be finite.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  double* row_ptr(std::size_t r) { return values_.data() + r * cols_; }
  const double* row_ptr(std::size_t r) const { return values_.data() + r * cols_; }

  std::span<double> data() { return values_; }
  std::span<const double> data() const { return values_; }

  std::vector<double> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> v);

  bool all_finite() const;
  // Throws std::invalid_argument naming `context` if any entry is NaN/Inf.
  void require_finite(const char* context) const;

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

// Shrinkage operator max(j - alpha, 0) + min(j + alpha, 0), the closed-form
// scalar lasso minimizer. alpha must be >= 0, both arguments finite.
double soft_threshold(double j, double alpha);

// Scales v to unit Euclidean norm in place. Returns false and leaves v
// unchanged when the norm is <= kEpsilonNorm; the caller picks the fallback.
bool unit_normalize(std::span<double> v);
bool unit_normalize_column(Matrix& m, std::size_t col);

// Solves m * z = rhs for symmetric positive-definite m via Cholesky.
// m must be symmetric within 1e-10 entrywise. The returned z satisfies
// ||m*z - rhs||_max <= 1e-8 * (1 + ||rhs||_max) or SingularSystemError is
// thrown. The inverse is never formed.
Matrix solve_spd_system(const Matrix& m, const Matrix& rhs);

// tr(lap * m^T * m) for lap n x n and m c x n.
double trace_quadratic(const Matrix& lap, const Matrix& m);

// All eigenvalues of a symmetric matrix by cyclic Jacobi, ascending.
// Intended for diagnostics and tests, not large-scale work.
std::vector<double> symmetric_eigenvalues(Matrix a);

// Reusable Cholesky factorization: factor once, solve many right-hand sides.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(const Matrix& spd);
  std::size_t dim() const { return lower_.rows(); }
  Matrix solve(const Matrix& rhs) const;

 private:
  Matrix lower_;
};

// Small dense helpers.
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
void add_scaled(Matrix& a, const Matrix& b, double s);  // a += s * b
double frobenius_sq(const Matrix& a);
double l1_norm(const Matrix& a);
double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
double column_norm(const Matrix& a, std::size_t col);

}  // namespace dldl
