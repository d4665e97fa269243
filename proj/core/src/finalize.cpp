#include "ghsvd/finalize.hpp"

#include <cmath>
#include <iostream>
#include <limits>

#include "ghsvd/dense.hpp"
#include "ghsvd/errors.hpp"
#include "ghsvd/parallel.hpp"

namespace ghsvd {
namespace {

ComplexMatrix scale_columns(const ComplexMatrix& a, std::span<const double> d) {
  ComplexMatrix out = a;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (auto& v : out.col(j)) v *= d[j];
  }
  return out;
}

double relative_misfit(const ComplexMatrix& a, const ComplexMatrix& b_scaled, const ComplexMatrix& x) {
  ComplexMatrix r = a;
  gemm(Op::None, Op::None, -1.0, b_scaled.view(), x.view(), 1.0, r.view());
  const double base = frobenius_norm(a.view());
  const double num = frobenius_norm(r.view());
  return base > 0.0 ? num / base : num;
}

}  // namespace

LuCp lu_complete(const ComplexMatrix& z) {
  require(z.rows() == z.cols(), "lu_complete: matrix must be square");
  const std::size_t n = z.rows();
  LuCp out;
  out.order = n;
  out.P = identity_permutation(n);
  out.Q = identity_permutation(n);
  ComplexMatrix a = z;
  const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_abs(z.view());

  for (std::size_t k = 0; k < n; ++k) {
    double best = -1.0;
    std::size_t bi = k, bj = k;
    for (std::size_t j = k; j < n; ++j) {
      for (std::size_t i = k; i < n; ++i) {
        const double v = std::norm(a(i, j));
        if (v > best || (v == best && (i < bi || (i == bi && j < bj)))) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(bi, j));
      std::swap(out.P[k], out.P[bi]);
    }
    if (bj != k) {
      auto x = a.col(k);
      auto y = a.col(bj);
      std::swap_ranges(x.begin(), x.end(), y.begin());
      std::swap(out.Q[k], out.Q[bj]);
    }
    Complex piv = a(k, k);
    if (std::abs(piv) <= floor) {
      const double mag = std::abs(piv);
      piv = mag > 0.0 ? piv * (floor / mag) : Complex(floor);
      if (piv == Complex{}) piv = Complex(std::numeric_limits<double>::min());
      a(k, k) = piv;
      out.perturbed += 1;
      std::clog << "ghsvd: lu_complete perturbed a tiny pivot at step " << k << "\n";
    }
    for (std::size_t i = k + 1; i < n; ++i) a(i, k) /= piv;
    for (std::size_t j = k + 1; j < n; ++j) {
      const Complex akj = a(k, j);
      if (akj == Complex{}) continue;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= a(i, k) * akj;
    }
  }

  out.L = ComplexMatrix::identity(n);
  out.Uu = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i <= j; ++i) out.Uu(i, j) = a(i, j);
    for (std::size_t i = j + 1; i < n; ++i) out.L(i, j) = a(i, j);
  }
  return out;
}

ComplexMatrix invert(const LuCp& lu, std::size_t workers) {
  const std::size_t n = lu.order;
  ComplexMatrix x(n, n);
  std::vector<std::size_t> row_of(n);
  for (std::size_t i = 0; i < n; ++i) row_of[lu.P[i]] = i;
  WorkerPool pool(workers);
  std::vector<std::vector<Complex>> scratch(pool.size(), std::vector<Complex>(n));
  pool.for_each(n, [&](std::size_t j, std::size_t worker) {
    auto& y = scratch[worker];
    std::fill(y.begin(), y.end(), Complex{});
    y[row_of[j]] = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
      const Complex yc = y[c];
      if (yc == Complex{}) continue;
      for (std::size_t i = c + 1; i < n; ++i) y[i] -= lu.L(i, c) * yc;
    }
    for (std::size_t c = n; c-- > 0;) {
      y[c] /= lu.Uu(c, c);
      const Complex yc = y[c];
      for (std::size_t i = 0; i < c; ++i) y[i] -= lu.Uu(i, c) * yc;
    }
    for (std::size_t i = 0; i < n; ++i) x(lu.Q[i], j) = y[i];
  });
  return x;
}

double kappa_proxy(const LuCp& lu) {
  if (lu.order == 0) return 1.0;
  double lo = std::abs(lu.Uu(0, 0)), hi = lo;
  for (std::size_t i = 1; i < lu.order; ++i) {
    const double d = std::abs(lu.Uu(i, i));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

Residuals residuals(const ComplexMatrix& f, const ComplexMatrix& g, const ComplexMatrix& u, const ComplexMatrix& v,
                    std::span<const double> sigma_f, std::span<const double> sigma_g, const ComplexMatrix& x) {
  const std::size_t n = x.rows();
  require(x.cols() == f.cols() && f.cols() == g.cols() && u.cols() == n && v.cols() == n &&
              u.rows() == f.rows() && v.rows() == g.rows() && sigma_f.size() == n && sigma_g.size() == n,
          "residuals: inconsistent shapes");
  return {relative_misfit(f, scale_columns(u, sigma_f), x), relative_misfit(g, scale_columns(v, sigma_g), x)};
}

double eigen_residual(const ComplexMatrix& h, const ComplexMatrix& s, const ComplexMatrix& z,
                      std::span<const double> lambda) {
  const std::size_t n = h.rows();
  require(h.cols() == n && s.rows() == n && s.cols() == n && z.rows() == n && lambda.size() == z.cols(),
          "eigen_residual: inconsistent shapes");
  ComplexMatrix r(n, z.cols());
  gemm(Op::None, Op::None, 1.0, h.view(), z.view(), 0.0, r.view());
  const ComplexMatrix zl = scale_columns(z, lambda);
  gemm(Op::None, Op::None, -1.0, s.view(), zl.view(), 1.0, r.view());
  const double denom = frobenius_norm(h.view()) * frobenius_norm(z.view());
  const double num = frobenius_norm(r.view());
  return denom > 0.0 ? num / denom : num;
}

}  // namespace ghsvd
