#include "dldl/kernels.hpp"

#include <stdexcept>

namespace dldl {

namespace {

void check_inner(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": inner dimension mismatch");
}

}  // namespace

Matrix multiply(const Matrix& a, const Matrix& b) {
  check_inner(a.cols(), b.rows(), "multiply");
  Matrix c(a.rows(), b.cols());
  const std::size_t n = a.cols();
  const std::size_t p = b.cols();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* crow = c.row_ptr(i);
    const double* arow = a.row_ptr(i);
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = arow[k];
      const double* brow = b.row_ptr(k);
      for (std::size_t j = 0; j < p; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix multiply_tn(const Matrix& a, const Matrix& b) {
  check_inner(a.rows(), b.rows(), "multiply_tn");
  Matrix c(a.cols(), b.cols());
  const std::size_t n = a.rows();
  const std::size_t p = b.cols();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < a.cols(); ++i) {
    double* crow = c.row_ptr(i);
    for (std::size_t k = 0; k < n; ++k) {
      const double aki = a(k, i);
      const double* brow = b.row_ptr(k);
      for (std::size_t j = 0; j < p; ++j) crow[j] += aki * brow[j];
    }
  }
  return c;
}

Matrix multiply_nt(const Matrix& a, const Matrix& b) {
  check_inner(a.cols(), b.cols(), "multiply_nt");
  Matrix c(a.rows(), b.rows());
  const std::size_t n = a.cols();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* crow = c.row_ptr(i);
    const double* arow = a.row_ptr(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* brow = b.row_ptr(j);
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += arow[k] * brow[k];
      crow[j] = s;
    }
  }
  return c;
}

Matrix pairwise_squared_distances(const Matrix& points) {
  const std::size_t dim = points.rows();
  const std::size_t n = points.cols();
  Matrix d(n, n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < n; ++i) {
    double* drow = d.row_ptr(i);
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double diff = points(k, i) - points(k, j);
        s += diff * diff;
      }
      drow[j] = s;
    }
  }
  return d;
}

namespace serial {

Matrix multiply(const Matrix& a, const Matrix& b) {
  check_inner(a.cols(), b.rows(), "serial::multiply");
  Matrix c(a.rows(), b.cols());
  const std::size_t n = a.cols();
  const std::size_t p = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* crow = c.row_ptr(i);
    const double* arow = a.row_ptr(i);
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = arow[k];
      const double* brow = b.row_ptr(k);
      for (std::size_t j = 0; j < p; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix multiply_tn(const Matrix& a, const Matrix& b) {
  check_inner(a.rows(), b.rows(), "serial::multiply_tn");
  Matrix c(a.cols(), b.cols());
  const std::size_t n = a.rows();
  const std::size_t p = b.cols();
  for (std::size_t i = 0; i < a.cols(); ++i) {
    double* crow = c.row_ptr(i);
    for (std::size_t k = 0; k < n; ++k) {
      const double aki = a(k, i);
      const double* brow = b.row_ptr(k);
      for (std::size_t j = 0; j < p; ++j) crow[j] += aki * brow[j];
    }
  }
  return c;
}

Matrix multiply_nt(const Matrix& a, const Matrix& b) {
  check_inner(a.cols(), b.cols(), "serial::multiply_nt");
  Matrix c(a.rows(), b.rows());
  const std::size_t n = a.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* crow = c.row_ptr(i);
    const double* arow = a.row_ptr(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* brow = b.row_ptr(j);
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += arow[k] * brow[k];
      crow[j] = s;
    }
  }
  return c;
}

Matrix pairwise_squared_distances(const Matrix& points) {
  const std::size_t dim = points.rows();
  const std::size_t n = points.cols();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double* drow = d.row_ptr(i);
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double diff = points(k, i) - points(k, j);
        s += diff * diff;
      }
      drow[j] = s;
    }
  }
  return d;
}

}  // namespace serial

}  // namespace dldl
