#include "ghsvd/dense.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "ghsvd/errors.hpp"

namespace ghsvd {
namespace {

void pin_blas_threads() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

std::size_t op_rows(Op op, ConstMatrixView v) { return op == Op::None ? v.rows : v.cols; }
std::size_t op_cols(Op op, ConstMatrixView v) { return op == Op::None ? v.cols : v.rows; }
CBLAS_TRANSPOSE cblas_op(Op op) { return op == Op::None ? CblasNoTrans : CblasConjTrans; }
blasint ld(std::size_t stride) { return static_cast<blasint>(std::max<std::size_t>(stride, 1)); }

}  // namespace

void gemm(Op op_a, Op op_b, Complex alpha, ConstMatrixView a, ConstMatrixView b, Complex beta, MatrixView c) {
  const std::size_t m = op_rows(op_a, a), k = op_cols(op_a, a), n = op_cols(op_b, b);
  require(op_rows(op_b, b) == k, "gemm: inner dimensions differ");
  require(c.rows == m && c.cols == n, "gemm: output shape mismatch");
  if (m == 0 || n == 0) return;
  pin_blas_threads();
  if (k == 0) {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) c(i, j) *= beta;
    return;
  }
  cblas_zgemm(CblasColMajor, cblas_op(op_a), cblas_op(op_b), static_cast<blasint>(m), static_cast<blasint>(n),
              static_cast<blasint>(k), &alpha, a.data, ld(a.stride), b.data, ld(b.stride), &beta, c.data,
              ld(c.stride));
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b, Op op_a, Op op_b) {
  ComplexMatrix c(op_rows(op_a, a.view()), op_cols(op_b, b.view()));
  gemm(op_a, op_b, 1.0, a.view(), b.view(), 0.0, c.view());
  return c;
}

ComplexMatrix gram_matrix(ConstMatrixView g) {
  const std::size_t n = g.cols;
  ComplexMatrix s(n, n);
  if (n == 0) return s;
  pin_blas_threads();
  if (g.rows > 0) {
    cblas_zherk(CblasColMajor, CblasLower, CblasConjTrans, static_cast<blasint>(n), static_cast<blasint>(g.rows),
                1.0, g.data, ld(g.stride), 0.0, s.data(), ld(s.stride()));
  }
  for (std::size_t j = 0; j < n; ++j) {
    s(j, j) = Complex(s(j, j).real(), 0.0);
    for (std::size_t i = j + 1; i < n; ++i) s(j, i) = std::conj(s(i, j));
  }
  return s;
}

ComplexMatrix adjoint(ConstMatrixView a) {
  ComplexMatrix t(a.cols, a.rows);
  for (std::size_t j = 0; j < a.cols; ++j)
    for (std::size_t i = 0; i < a.rows; ++i) t(j, i) = std::conj(a(i, j));
  return t;
}

void make_hermitian(ComplexMatrix& a) {
  require(a.rows() == a.cols(), "make_hermitian: matrix must be square");
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    a(j, j) = Complex(a(j, j).real(), 0.0);
    for (std::size_t i = j + 1; i < n; ++i) {
      const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = avg;
      a(j, i) = std::conj(avg);
    }
  }
}

double frobenius_norm(ConstMatrixView a) {
  // Scaled sum of squares, as in LAPACK's xLASSQ, so huge or tiny entries
  // neither overflow nor underflow.
  double scale = 0.0, ssq = 1.0;
  auto add = [&](double x) {
    const double ax = std::abs(x);
    if (ax == 0.0) return;
    if (scale < ax) {
      ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
      scale = ax;
    } else {
      ssq += (ax / scale) * (ax / scale);
    }
  };
  for (std::size_t j = 0; j < a.cols; ++j)
    for (std::size_t i = 0; i < a.rows; ++i) {
      add(a(i, j).real());
      add(a(i, j).imag());
    }
  return scale * std::sqrt(ssq);
}

double max_abs(ConstMatrixView a) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.cols; ++j)
    for (std::size_t i = 0; i < a.rows; ++i) m = std::max(m, std::abs(a(i, j)));
  return m;
}

double frobenius_distance(ConstMatrixView a, ConstMatrixView b) {
  require(a.rows == b.rows && a.cols == b.cols, "frobenius_distance: shape mismatch");
  ComplexMatrix d(a.rows, a.cols);
  for (std::size_t j = 0; j < a.cols; ++j)
    for (std::size_t i = 0; i < a.rows; ++i) d(i, j) = a(i, j) - b(i, j);
  return frobenius_norm(d.view());
}

}  // namespace ghsvd
