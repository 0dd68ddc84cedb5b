#include "dldl/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dldl {

namespace {

void check_shape(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("Matrix: rows and cols must be >= 1, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  check_shape(rows, cols);
  values_.assign(rows * cols, 0.0);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  check_shape(rows, cols);
  if (values_.size() != rows * cols) {
    throw std::invalid_argument("Matrix: value count does not match shape");
  }
  require_finite("Matrix constructor");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = values_[r * cols_ + c];
  return v;
}

void Matrix::set_column(std::size_t c, std::span<const double> v) {
  for (std::size_t r = 0; r < rows_; ++r) values_[r * cols_ + c] = v[r];
}

bool Matrix::all_finite() const {
  for (double x : values_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void Matrix::require_finite(const char* context) const {
  if (!all_finite()) {
    throw std::invalid_argument(std::string(context) + ": non-finite matrix entry");
  }
}

double soft_threshold(double j, double alpha) {
  if (!std::isfinite(j) || !std::isfinite(alpha)) {
    throw std::invalid_argument("soft_threshold: non-finite input");
  }
  if (alpha < 0.0) {
    throw std::invalid_argument("soft_threshold: alpha must be >= 0");
  }
  return std::max(j - alpha, 0.0) + std::min(j + alpha, 0.0);
}

bool unit_normalize(std::span<double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  if (norm <= kEpsilonNorm) return false;
  for (double& x : v) x /= norm;
  return true;
}

bool unit_normalize_column(Matrix& m, std::size_t col) {
  std::vector<double> v = m.column(col);
  if (!unit_normalize(v)) return false;
  m.set_column(col, v);
  return true;
}

CholeskyFactor::CholeskyFactor(const Matrix& spd) : lower_(spd.rows(), spd.cols()) {
  if (spd.rows() != spd.cols()) {
    throw std::invalid_argument("CholeskyFactor: matrix is not square");
  }
  const std::size_t n = spd.rows();
  Matrix& l = lower_;
  for (std::size_t j = 0; j < n; ++j) {
    double d = spd(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw SingularSystemError("Cholesky pivot " + std::to_string(j) +
                                " is not positive; matrix is not positive definite");
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    // Rows below the pivot are independent of each other.
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = spd(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
}

Matrix CholeskyFactor::solve(const Matrix& rhs) const {
  const std::size_t n = dim();
  if (rhs.rows() != n) {
    throw std::invalid_argument("CholeskyFactor::solve: rhs row count mismatch");
  }
  const std::size_t c = rhs.cols();
  Matrix z(n, c);
  const Matrix& l = lower_;
  // Columns are independent systems.
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t col = 0; col < c; ++col) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = rhs(i, col);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * z(k, col);
      z(ii, col) = s / l(ii, ii);
    }
  }
  return z;
}

namespace {

Matrix residual(const Matrix& m, const Matrix& z, const Matrix& rhs) {
  const std::size_t n = m.rows();
  const std::size_t c = rhs.cols();
  Matrix r(n, c);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      double s = rhs(i, j);
      for (std::size_t k = 0; k < n; ++k) s -= m(i, k) * z(k, j);
      r(i, j) = s;
    }
  }
  return r;
}

}  // namespace

Matrix solve_spd_system(const Matrix& m, const Matrix& rhs) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("solve_spd_system: matrix is not square");
  }
  if (rhs.rows() != m.rows()) {
    throw std::invalid_argument("solve_spd_system: rhs row count mismatch");
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-10) {
        throw std::invalid_argument("solve_spd_system: matrix is not symmetric");
      }
    }
  }
  const CholeskyFactor factor(m);
  Matrix z = factor.solve(rhs);
  const double bound = 1e-8 * (1.0 + max_abs(rhs));
  for (int refine = 0; refine < 2; ++refine) {
    const Matrix r = residual(m, z, rhs);
    if (max_abs(r) <= bound) return z;
    add_scaled(z, factor.solve(r), 1.0);
  }
  if (max_abs(residual(m, z, rhs)) <= bound) return z;
  throw SingularSystemError("solve_spd_system: residual bound not met; system too ill conditioned");
}

double trace_quadratic(const Matrix& lap, const Matrix& m) {
  if (lap.rows() != lap.cols()) {
    throw std::invalid_argument("trace_quadratic: lap is not square");
  }
  if (m.cols() != lap.rows()) {
    throw std::invalid_argument("trace_quadratic: m column count must match lap");
  }
  // tr(lap m^T m) = sum_{r,s} lap(r,s) * <m col s, m col r>; the inner
  // products form a symmetric matrix, so this equals sum((m lap^T) .* m).
  const std::size_t n = lap.rows();
  const std::size_t c = m.rows();
  double total = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t r = 0; r < n; ++r) {
      double w = 0.0;
      for (std::size_t s = 0; s < n; ++s) w += m(i, s) * lap(r, s);
      total += w * m(i, r);
    }
  }
  return total;
}

std::vector<double> symmetric_eigenvalues(Matrix a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("symmetric_eigenvalues: matrix is not square");
  }
  const std::size_t n = a.rows();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  if (scale == 0.0) return std::vector<double>(n, 0.0);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-14 * scale * static_cast<double>(n)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = cs * akp - sn * akq;
          a(k, q) = sn * akp + cs * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = cs * apk - sn * aqk;
          a(q, k) = sn * apk + cs * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

Matrix add(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("add: shape mismatch");
  Matrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] += bd[i];
  return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("subtract: shape mismatch");
  Matrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] -= bd[i];
  return c;
}

void add_scaled(Matrix& a, const Matrix& b, double s) {
  if (!a.same_shape(b)) throw std::invalid_argument("add_scaled: shape mismatch");
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < ad.size(); ++i) ad[i] += s * bd[i];
}

double frobenius_sq(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += x * x;
  return s;
}

double l1_norm(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += std::abs(x);
  return s;
}

double max_abs(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data()) s = std::max(s, std::abs(x));
  return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double s = 0.0;
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < ad.size(); ++i) s = std::max(s, std::abs(ad[i] - bd[i]));
  return s;
}

double column_norm(const Matrix& a, std::size_t col) {
  double sq = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) sq += a(r, col) * a(r, col);
  return std::sqrt(sq);
}

}  // namespace dldl
