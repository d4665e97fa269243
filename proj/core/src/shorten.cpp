#include "ghsvd/shorten.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "ghsvd/dense.hpp"
#include "ghsvd/errors.hpp"
#include "ghsvd/parallel.hpp"

namespace ghsvd {
namespace {

const double kAlpha = (1.0 + std::sqrt(17.0)) / 8.0;

std::span<const Complex> col_of(ConstMatrixView v, std::size_t j) { return v.col(j); }

void swap_rows(MatrixView v, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < v.cols; ++j) std::swap(v(a, j), v(b, j));
}

void swap_cols(MatrixView v, std::size_t a, std::size_t b) {
  if (a == b) return;
  auto x = v.col(a);
  auto y = v.col(b);
  std::swap_ranges(x.begin(), x.end(), y.begin());
}

// Applies one reflector to columns [first, cols) of v, rows [offset, rows).
void apply_to_columns(const JReflector& r, std::span<const std::int8_t> signs, MatrixView v, std::size_t first,
                      Lanes lanes, WorkerPool* pool) {
  if (first >= v.cols) return;
  const auto body = [&](std::size_t idx, std::size_t) {
    apply_reflector(r.s, r.tau, signs.subspan(r.offset), v.col(first + idx).subspan(r.offset), lanes);
  };
  const std::size_t count = v.cols - first;
  if (pool) {
    pool->for_each(count, body);
  } else {
    for (std::size_t i = 0; i < count; ++i) body(i, 0);
  }
}

// Reduces column c of v below row `row`; returns the stored reflector.
JReflector reduce_column(MatrixView v, std::span<std::int8_t> signs, std::size_t row, std::size_t c,
                         std::size_t step, std::vector<std::pair<std::size_t, std::size_t>>& swaps, Lanes lanes,
                         WorkerPool* pool) {
  const auto f = v.col(c).subspan(row);
  ReflectorResult r = reflector(f, signs.subspan(row), step, lanes);
  if (r.row_swap) {
    const std::size_t other = row + *r.row_swap;
    swap_rows(v, row, other);
    std::swap(signs[row], signs[other]);
    swaps.emplace_back(row, other);
  }
  JReflector out{row, std::move(r.s), r.tau};
  apply_to_columns(out, signs, v, c + 1, lanes, pool);
  auto col = v.col(c);
  col[row] = -r.c1;
  std::fill(col.begin() + static_cast<std::ptrdiff_t>(row) + 1, col.end(), Complex{});
  return out;
}

}  // namespace

PivotChoice pivot_select(ConstMatrixView fk, std::span<const std::int8_t> jk, Lanes lanes) {
  require(fk.cols > 0 && fk.rows == jk.size(), "pivot_select: empty block or signature mismatch");
  const std::size_t n = fk.cols;
  PivotChoice out;
  std::vector<std::size_t> idx(n);
  for (std::size_t j = 0; j < n; ++j) idx[j] = j;
  std::vector<double> diag(n);
  for (std::size_t j = 0; j < n; ++j) diag[j] = jnormsq(col_of(fk, j), jk, lanes);

  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (std::abs(diag[j]) > std::abs(diag[best])) best = j;
  }
  if (best != 0) {
    out.swaps.emplace_back(0, best);
    std::swap(idx[0], idx[best]);
  }
  if (n == 1) return out;

  const double h11 = std::abs(diag[idx[0]]);
  std::size_t i = 1;
  double h1i = -1.0;
  for (std::size_t l = 1; l < n; ++l) {
    const double v = std::abs(jdot(col_of(fk, idx[0]), col_of(fk, idx[l]), jk, lanes));
    if (v > h1i) {
      h1i = v;
      i = l;
    }
  }
  if (h11 >= kAlpha * h1i) return out;

  double hij = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    if (l == i) continue;
    hij = std::max(hij, std::abs(jdot(col_of(fk, idx[i]), col_of(fk, idx[l]), jk, lanes)));
  }
  if (h11 * hij >= kAlpha * h1i * h1i) return out;
  if (std::abs(diag[idx[i]]) >= kAlpha * hij) {
    out.swaps.emplace_back(0, i);
    return out;
  }
  out.kind = PivotKind::TwoByTwo;
  if (i != 1) out.swaps.emplace_back(1, i);
  return out;
}

PivotChoice pivot_select(ConstMatrixView fk, const Signature& jk, Lanes lanes) {
  const auto signs = decode_signature(jk);
  return pivot_select(fk, std::span<const std::int8_t>(signs), lanes);
}

ReflectorResult reflector(std::span<const Complex> f, std::span<const std::int8_t> jk, std::size_t step,
                          Lanes lanes) {
  require(!f.empty() && f.size() == jk.size(), "reflector: length mismatch");
  const double h = jnormsq(f, jk, lanes);
  if (h == 0.0 || !std::isfinite(h)) throw DegeneratePivot(step, "reflector: column has zero J-norm");
  const int sg = h > 0.0 ? 1 : -1;

  ReflectorResult out;
  out.s.assign(f.begin(), f.end());
  if (jk[0] != sg) {
    std::size_t r = 0;
    double best = -1.0;
    for (std::size_t i = 1; i < f.size(); ++i) {
      if (jk[i] != sg) continue;
      const double a = std::abs(f[i]);
      if (a > best) {
        best = a;
        r = i;
      }
    }
    if (r == 0) throw DegeneratePivot(step, "reflector: no row carries the sign of the J-norm");
    std::swap(out.s[0], out.s[r]);
    out.row_swap = r;
  }
  const Complex f11 = out.s[0];
  const double a11 = std::abs(f11);
  const Complex phase = a11 == 0.0 ? Complex(1.0) : f11 / a11;
  const double root = std::sqrt(std::abs(h));
  out.c1 = root * phase;
  out.s[0] += out.c1;
  out.tau = -1.0 / (h + root * a11 * sg);
  return out;
}

void apply_reflector(std::span<const Complex> s, double tau, std::span<const std::int8_t> jk, std::span<Complex> col,
                     Lanes lanes) {
  require(s.size() == col.size() && s.size() == jk.size(), "apply_reflector: length mismatch");
  const Complex w = tau * jdot(s, col, jk, lanes);
  if (w == Complex{}) return;
  for (std::size_t i = 0; i < col.size(); ++i) col[i] += w * s[i];
}

UrvPivot urv_step(MatrixView block, std::span<std::int8_t> jk, std::size_t step, Lanes lanes, WorkerPool* pool) {
  require(block.cols >= 2 && block.rows >= 2 && block.rows == jk.size(), "urv_step: need a two-column block");
  UrvPivot out;
  auto p = block.col(0);
  auto q = block.col(1);
  const std::span<const std::int8_t> cj(jk);
  const double h11 = jnormsq(p, cj, lanes);
  const double h22 = jnormsq(q, cj, lanes);
  const Complex h12 = jdot(p, q, cj, lanes);
  const Eig2 e = hermitian_eig2(h11, h12, h22);
  if (e.l1 == 0.0 || e.l2 == 0.0) throw DegeneratePivot(step, "urv_step: singular 2x2 pivot Grammian");
  out.rotation = e.r;
  vrotm(p, q, e.r);

  out.first = reduce_column(block, jk, 0, 0, step, out.row_swaps, lanes, pool);
  out.second = reduce_column(block, jk, 1, 1, step + 1, out.row_swaps, lanes, pool);

  const Complex t11 = block(0, 0), t12 = block(0, 1), t22 = block(1, 1);
  const Rotation2 ra = e.r.adjoint();
  out.f11 = t11 * ra.z11 + t12 * ra.z21;
  out.f12 = t11 * ra.z12 + t12 * ra.z22;
  out.f21 = t22 * ra.z21;
  out.f22 = t22 * ra.z22;
  block(0, 0) = out.f11;
  block(0, 1) = out.f12;
  block(1, 0) = out.f21;
  block(1, 1) = out.f22;
  return out;
}

JqrResult jqr(const ComplexMatrix& ft, const Signature& jt, Lanes lanes, WorkerPool* pool) {
  const std::size_t m = ft.rows();
  const std::size_t n = ft.cols();
  require(m >= n, "jqr: need at least as many rows as columns");
  require(jt.order() == m, "jqr: signature order must equal the row count");

  JqrResult out;
  ComplexMatrix w = ft;
  auto signs = decode_signature(jt);
  out.col_perm = identity_permutation(n);
  const std::span<std::int8_t> sj(signs);
  std::vector<bool> pair_start(n, false);

  std::size_t k = 0;
  while (k < n) {
    const MatrixView trailing{&w(k, k), m - k, n - k, w.stride()};
    const PivotChoice choice = pivot_select(trailing, sj.subspan(k), lanes);
    for (const auto& [a, b] : choice.swaps) {
      swap_cols(w.view(), k + a, k + b);
      std::swap(out.col_perm[k + a], out.col_perm[k + b]);
    }
    if (choice.kind == PivotKind::OneByOne) {
      out.reflectors.push_back(reduce_column(w.view(), sj, k, k, k, out.row_swaps, lanes, pool));
      k += 1;
      continue;
    }
    UrvPivot u = urv_step(trailing, sj.subspan(k), k, lanes, pool);
    for (const auto& [a, b] : u.row_swaps) out.row_swaps.emplace_back(k + a, k + b);
    u.first.offset += k;
    u.second.offset += k;
    out.reflectors.push_back(std::move(u.first));
    out.reflectors.push_back(std::move(u.second));
    out.two_by_two_count += 1;
    pair_start[k] = true;
    k += 2;
  }

  out.F = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t top = pair_start[j] ? j + 2 : j + 1;
    for (std::size_t i = 0; i < top; ++i) out.F(i, j) = w(i, j);
  }
  out.J = encode_signature(std::span<const std::int8_t>(signs).first(n));
  const double base = max_abs(ft.view());
  out.pivot_growth = base > 0.0 ? max_abs(out.F.view()) / base : 0.0;
  return out;
}

ComplexMatrix prepermute(const ComplexMatrix& g, std::span<const std::size_t> perm) {
  require(perm.size() == g.cols() && is_permutation(perm), "prepermute: invalid permutation");
  ComplexMatrix out(g.rows(), g.cols());
  for (std::size_t j = 0; j < g.cols(); ++j) {
    const auto src = g.col(perm[j]);
    std::copy(src.begin(), src.end(), out.col(j).begin());
  }
  return out;
}

namespace {

ComplexMatrix upper_with_real_diagonal(const ComplexMatrix& a, std::size_t n) {
  ComplexMatrix r(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i <= j; ++i) r(i, j) = a(i, j);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const double ad = std::abs(d);
    if (ad == 0.0) continue;
    const Complex ph = std::conj(d) / ad;
    for (std::size_t j = i; j < n; ++j) r(i, j) *= ph;
    r(i, i) = Complex(ad, 0.0);
  }
  return r;
}

}  // namespace

ComplexMatrix tsqr(const ComplexMatrix& gp) {
  const std::size_t m = gp.rows();
  const std::size_t n = gp.cols();
  require(m >= n, "tsqr: need at least as many rows as columns");
  if (n == 0) return {};
  ComplexMatrix a = gp;
  std::vector<Complex> tau(n);
  const lapack_int info = LAPACKE_zgeqrf(LAPACK_COL_MAJOR, static_cast<lapack_int>(m), static_cast<lapack_int>(n),
                                         a.data(), static_cast<lapack_int>(a.stride()), tau.data());
  if (info != 0) throw NumericalError("tsqr: zgeqrf failed with info " + std::to_string(info));
  return upper_with_real_diagonal(a, n);
}

ComplexMatrix tsqr_pivoted(const ComplexMatrix& gp, Permutation& perm) {
  const std::size_t m = gp.rows();
  const std::size_t n = gp.cols();
  require(m >= n, "tsqr_pivoted: need at least as many rows as columns");
  ComplexMatrix a = gp;
  std::vector<Complex> tau(n);
  std::vector<lapack_int> jpvt(n, 0);
  const lapack_int info = LAPACKE_zgeqp3(LAPACK_COL_MAJOR, static_cast<lapack_int>(m), static_cast<lapack_int>(n),
                                         a.data(), static_cast<lapack_int>(a.stride()), jpvt.data(), tau.data());
  if (info != 0) throw NumericalError("tsqr_pivoted: zgeqp3 failed with info " + std::to_string(info));
  perm.resize(n);
  for (std::size_t j = 0; j < n; ++j) perm[j] = static_cast<std::size_t>(jpvt[j] - 1);
  return upper_with_real_diagonal(a, n);
}

}  // namespace ghsvd
