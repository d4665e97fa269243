#include "ghsvd/oracle.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ghsvd/dense.hpp"
#include "ghsvd/errors.hpp"

namespace ghsvd {
namespace {

// Lower Cholesky factor, unpivoted.
ComplexMatrix cholesky_lower(const ComplexMatrix& s) {
  const std::size_t n = s.rows();
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j; i < n; ++i) l(i, j) = s(i, j);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double d = l(k, k).real();
    if (!(d > 0.0)) {
      throw IndefiniteMetric("oracle: Cholesky breakdown at column " + std::to_string(k));
    }
    const double r = std::sqrt(d);
    l(k, k) = r;
    for (std::size_t i = k + 1; i < n; ++i) l(i, k) /= r;
    for (std::size_t j = k + 1; j < n; ++j) {
      const Complex c = std::conj(l(j, k));
      for (std::size_t i = j; i < n; ++i) l(i, j) -= l(i, k) * c;
    }
  }
  return l;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a_in, ComplexMatrix* q, std::size_t* sweeps_out) {
  require(a_in.rows() == a_in.cols(), "hermitian_eigenvalues: matrix must be square");
  const std::size_t n = a_in.rows();
  ComplexMatrix a = a_in;
  make_hermitian(a);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double eps = std::numeric_limits<double>::epsilon();
  std::size_t sweeps = 0;
  for (; sweeps < 100; ++sweeps) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t qq = p + 1; qq < n; ++qq) {
        const Complex apq = a(p, qq);
        const double mag = std::abs(apq);
        const double app = a(p, p).real(), aqq = a(qq, qq).real();
        if (mag == 0.0 || mag <= eps * std::sqrt(std::abs(app) * std::abs(aqq)) * 0.5) continue;
        rotated = true;
        // Real rotation on the phase-free 2x2 block.
        const Complex e = apq / mag;
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Columns: a_p <- c a_p - s conj(e) a_q ; a_q <- s e a_p + c a_q.
        const Complex cp = -s * std::conj(e);
        const Complex cq = s * e;
        for (std::size_t i = 0; i < n; ++i) {
          const Complex x = a(i, p), y = a(i, qq);
          a(i, p) = c * x + cp * y;
          a(i, qq) = cq * x + c * y;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const Complex x = a(p, j), y = a(qq, j);
          a(p, j) = c * x + std::conj(cp) * y;
          a(qq, j) = std::conj(cq) * x + c * y;
        }
        a(p, qq) = 0.0;
        a(qq, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(qq, qq) = a(qq, qq).real();
        for (std::size_t i = 0; i < n; ++i) {
          const Complex x = v(i, p), y = v(i, qq);
          v(i, p) = c * x + cp * y;
          v(i, qq) = cq * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweeps_out) *sweeps_out = sweeps;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  std::vector<double> lambda(n);
  for (std::size_t i = 0; i < n; ++i) lambda[i] = a(order[i], order[i]).real();
  if (q) {
    *q = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto src = v.col(order[j]);
      std::copy(src.begin(), src.end(), q->col(j).begin());
    }
  }
  return lambda;
}

OracleResult oracle_solve(const ComplexMatrix& h, const ComplexMatrix& s) {
  const std::size_t n = h.rows();
  require(h.cols() == n && s.rows() == n && s.cols() == n, "oracle_solve: H and S must be square and conforming");
  OracleResult out;
  if (n == 0) return out;
  const ComplexMatrix l = cholesky_lower(s);
  const auto ln = static_cast<int>(n);
  const Complex one(1.0);
  // C = L^{-1} H L^{-*}.
  ComplexMatrix c = h;
  cblas_ztrsm(CblasColMajor, CblasLeft, CblasLower, CblasNoTrans, CblasNonUnit, ln, ln, &one, l.data(),
              static_cast<int>(l.stride()), c.data(), static_cast<int>(c.stride()));
  cblas_ztrsm(CblasColMajor, CblasRight, CblasLower, CblasConjTrans, CblasNonUnit, ln, ln, &one, l.data(),
              static_cast<int>(l.stride()), c.data(), static_cast<int>(c.stride()));
  ComplexMatrix q;
  out.lambda = hermitian_eigenvalues(c, &q, &out.sweeps);
  cblas_ztrsm(CblasColMajor, CblasLeft, CblasLower, CblasConjTrans, CblasNonUnit, ln, ln, &one, l.data(),
              static_cast<int>(l.stride()), q.data(), static_cast<int>(q.stride()));
  out.Z = std::move(q);
  return out;
}

Comparison compare(std::span<const double> values, std::span<const double> reference, double tol) {
  require(values.size() == reference.size(), "compare: length mismatch");
  std::vector<double> a(values.begin(), values.end()), b(reference.begin(), reference.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  Comparison out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    const double rel = b[i] != 0.0 ? diff / std::abs(b[i]) : diff;
    if (!(rel <= out.max_rel)) {
      out.max_rel = rel;
      out.worst = i;
    }
  }
  out.pass = out.max_rel <= tol;
  return out;
}

}  // namespace ghsvd
