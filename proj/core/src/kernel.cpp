#include "ghsvd/kernel.hpp"

#include <array>
#include <cmath>

#include "ghsvd/errors.hpp"

// Built with -ffp-contract=off; every product is rounded separately.

namespace ghsvd {
namespace {

template <int V>
struct DotAcc {
  std::array<double, V> re{};
  std::array<double, V> im{};
};

template <int V>
struct NormAcc {
  std::array<double, V> s{};
};

template <int V>
struct Gram3Acc {
  std::array<double, V> pp{};
  std::array<double, V> qq{};
  std::array<double, V> re{};
  std::array<double, V> im{};
};

template <int V>
double reduce(const std::array<double, V>& a) {
  double s = a[0];
  for (int l = 1; l < V; ++l) s += a[l];
  return s;
}

// Row i always feeds lane i % V, whatever segment of the signature it lies in.

template <int V, bool Neg>
inline void dot_row(const double* f, const double* g, std::size_t i, DotAcc<V>& acc) {
  const std::size_t l = i % V;
  const double fr = f[2 * i], fi = f[2 * i + 1], gr = g[2 * i], gi = g[2 * i + 1];
  const double re = fr * gr + fi * gi;
  const double im = fr * gi - fi * gr;
  if constexpr (Neg) {
    acc.re[l] -= re;
    acc.im[l] -= im;
  } else {
    acc.re[l] += re;
    acc.im[l] += im;
  }
}

template <int V, bool Neg>
void dot_range(const double* f, const double* g, std::size_t begin, std::size_t end, DotAcc<V>& acc) {
  std::size_t i = begin;
  for (; i < end && i % V != 0; ++i) dot_row<V, Neg>(f, g, i, acc);
  for (; i + V <= end; i += V) {
    for (int l = 0; l < V; ++l) {
      const double fr = f[2 * (i + l)], fi = f[2 * (i + l) + 1];
      const double gr = g[2 * (i + l)], gi = g[2 * (i + l) + 1];
      const double re = fr * gr + fi * gi;
      const double im = fr * gi - fi * gr;
      if constexpr (Neg) {
        acc.re[l] -= re;
        acc.im[l] -= im;
      } else {
        acc.re[l] += re;
        acc.im[l] += im;
      }
    }
  }
  for (; i < end; ++i) dot_row<V, Neg>(f, g, i, acc);
}

template <int V, bool Neg>
void norm_range(const double* f, std::size_t begin, std::size_t end, NormAcc<V>& acc) {
  std::size_t i = begin;
  auto row = [&](std::size_t r) {
    const double t = f[2 * r] * f[2 * r] + f[2 * r + 1] * f[2 * r + 1];
    if constexpr (Neg) acc.s[r % V] -= t;
    else acc.s[r % V] += t;
  };
  for (; i < end && i % V != 0; ++i) row(i);
  for (; i + V <= end; i += V) {
    for (int l = 0; l < V; ++l) {
      const double fr = f[2 * (i + l)], fi = f[2 * (i + l) + 1];
      const double t = fr * fr + fi * fi;
      if constexpr (Neg) acc.s[l] -= t;
      else acc.s[l] += t;
    }
  }
  for (; i < end; ++i) row(i);
}

template <int V, bool Neg>
void gram3_range(const double* p, const double* q, std::size_t begin, std::size_t end, Gram3Acc<V>& acc) {
  auto body = [&](std::size_t r, std::size_t l) {
    const double pr = p[2 * r], pi = p[2 * r + 1], qr = q[2 * r], qi = q[2 * r + 1];
    const double tpp = pr * pr + pi * pi;
    const double tqq = qr * qr + qi * qi;
    const double re = pr * qr + pi * qi;
    const double im = pr * qi - pi * qr;
    if constexpr (Neg) {
      acc.pp[l] -= tpp;
      acc.qq[l] -= tqq;
      acc.re[l] -= re;
      acc.im[l] -= im;
    } else {
      acc.pp[l] += tpp;
      acc.qq[l] += tqq;
      acc.re[l] += re;
      acc.im[l] += im;
    }
  };
  std::size_t i = begin;
  for (; i < end && i % V != 0; ++i) body(i, i % V);
  for (; i + V <= end; i += V) {
    for (int l = 0; l < V; ++l) body(i + l, static_cast<std::size_t>(l));
  }
  for (; i < end; ++i) body(i, i % V);
}

// Walks the alternating +/- segments of a run-length signature.
template <class Fn>
void for_each_segment(const Signature& j, std::size_t m, Fn&& fn) {
  std::size_t pos = 0;
  for (const auto& b : j.neg_blocks()) {
    if (b.start > pos) fn(pos, b.start, false);
    fn(b.start, b.start + b.length, true);
    pos = b.start + b.length;
  }
  if (pos < m) fn(pos, m, false);
}

template <class Fn>
void for_each_segment(std::span<const std::int8_t> signs, Fn&& fn) {
  std::size_t pos = 0;
  const std::size_t m = signs.size();
  while (pos < m) {
    std::size_t end = pos + 1;
    while (end < m && signs[end] == signs[pos]) ++end;
    fn(pos, end, signs[pos] < 0);
    pos = end;
  }
}

template <int V, class Segments>
Complex jdot_impl(const double* f, const double* g, Segments&& segments) {
  DotAcc<V> acc;
  segments([&](std::size_t b, std::size_t e, bool neg) {
    if (neg) dot_range<V, true>(f, g, b, e, acc);
    else dot_range<V, false>(f, g, b, e, acc);
  });
  return {reduce<V>(acc.re), reduce<V>(acc.im)};
}

template <int V, class Segments>
double jnorm_impl(const double* f, Segments&& segments) {
  NormAcc<V> acc;
  segments([&](std::size_t b, std::size_t e, bool neg) {
    if (neg) norm_range<V, true>(f, b, e, acc);
    else norm_range<V, false>(f, b, e, acc);
  });
  return reduce<V>(acc.s);
}

template <int V, class Segments>
Gram3 gram3_impl(const double* p, const double* q, Segments&& segments) {
  Gram3Acc<V> acc;
  segments([&](std::size_t b, std::size_t e, bool neg) {
    if (neg) gram3_range<V, true>(p, q, b, e, acc);
    else gram3_range<V, false>(p, q, b, e, acc);
  });
  return {reduce<V>(acc.pp), reduce<V>(acc.qq), Complex{reduce<V>(acc.re), reduce<V>(acc.im)}};
}

template <class Fn>
decltype(auto) dispatch(Lanes lanes, Fn&& fn) {
  switch (lanes.value) {
    case 1: return fn(std::integral_constant<int, 1>{});
    case 2: return fn(std::integral_constant<int, 2>{});
    case 4: return fn(std::integral_constant<int, 4>{});
    case 8: return fn(std::integral_constant<int, 8>{});
    case 16: return fn(std::integral_constant<int, 16>{});
    default: throw ContractViolation("Lanes must be one of 1, 2, 4, 8, 16");
  }
}

const double* raw(std::span<const Complex> v) { return reinterpret_cast<const double*>(v.data()); }

}  // namespace

void validate(Lanes lanes) {
  dispatch(lanes, [](auto) { return 0; });
}

Complex jdot(std::span<const Complex> f, std::span<const Complex> g, const Signature& j, Lanes lanes) {
  require(f.size() == g.size() && f.size() == j.order(), "jdot: length mismatch");
  return dispatch(lanes, [&](auto v) {
    return jdot_impl<decltype(v)::value>(raw(f), raw(g),
                                         [&](auto&& fn) { for_each_segment(j, f.size(), fn); });
  });
}

Complex jdot(std::span<const Complex> f, std::span<const Complex> g, std::span<const std::int8_t> signs,
             Lanes lanes) {
  require(f.size() == g.size() && f.size() == signs.size(), "jdot: length mismatch");
  return dispatch(lanes, [&](auto v) {
    return jdot_impl<decltype(v)::value>(raw(f), raw(g), [&](auto&& fn) { for_each_segment(signs, fn); });
  });
}

Complex dot(std::span<const Complex> f, std::span<const Complex> g, Lanes lanes) {
  require(f.size() == g.size(), "dot: length mismatch");
  return dispatch(lanes, [&](auto v) {
    return jdot_impl<decltype(v)::value>(raw(f), raw(g), [&](auto&& fn) { fn(0, f.size(), false); });
  });
}

double jnormsq(std::span<const Complex> f, const Signature& j, Lanes lanes) {
  require(f.size() == j.order(), "jnormsq: length mismatch");
  return dispatch(lanes, [&](auto v) {
    return jnorm_impl<decltype(v)::value>(raw(f), [&](auto&& fn) { for_each_segment(j, f.size(), fn); });
  });
}

double jnormsq(std::span<const Complex> f, std::span<const std::int8_t> signs, Lanes lanes) {
  require(f.size() == signs.size(), "jnormsq: length mismatch");
  return dispatch(lanes, [&](auto v) {
    return jnorm_impl<decltype(v)::value>(raw(f), [&](auto&& fn) { for_each_segment(signs, fn); });
  });
}

double normsq(std::span<const Complex> f, Lanes lanes) {
  return dispatch(lanes, [&](auto v) {
    return jnorm_impl<decltype(v)::value>(raw(f), [&](auto&& fn) { fn(0, f.size(), false); });
  });
}

Gram3 jgram3(std::span<const Complex> p, std::span<const Complex> q, const Signature& j, Lanes lanes) {
  require(p.size() == q.size() && p.size() == j.order(), "jgram3: length mismatch");
  return dispatch(lanes, [&](auto v) {
    return gram3_impl<decltype(v)::value>(raw(p), raw(q),
                                          [&](auto&& fn) { for_each_segment(j, p.size(), fn); });
  });
}

Gram3 gram3(std::span<const Complex> p, std::span<const Complex> q, Lanes lanes) {
  require(p.size() == q.size(), "gram3: length mismatch");
  return dispatch(lanes, [&](auto v) {
    return gram3_impl<decltype(v)::value>(raw(p), raw(q), [&](auto&& fn) { fn(0, p.size(), false); });
  });
}

void vrotm(std::span<Complex> p, std::span<Complex> q, const Rotation2& z) {
  require(p.size() == q.size(), "vrotm: length mismatch");
  if (z.is_identity()) return;
  double* pd = reinterpret_cast<double*>(p.data());
  double* qd = reinterpret_cast<double*>(q.data());
  const double a_r = z.z11.real(), a_i = z.z11.imag();
  const double b_r = z.z12.real(), b_i = z.z12.imag();
  const double c_r = z.z21.real(), c_i = z.z21.imag();
  const double d_r = z.z22.real(), d_i = z.z22.imag();
  const std::size_t m = p.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double pr = pd[2 * i], pi = pd[2 * i + 1];
    const double qr = qd[2 * i], qi = qd[2 * i + 1];
    pd[2 * i] = (pr * a_r - pi * a_i) + (qr * c_r - qi * c_i);
    pd[2 * i + 1] = (pr * a_i + pi * a_r) + (qr * c_i + qi * c_r);
    qd[2 * i] = (pr * b_r - pi * b_i) + (qr * d_r - qi * d_i);
    qd[2 * i + 1] = (pr * b_i + pi * b_r) + (qr * d_i + qi * d_r);
  }
}

void scale_rows_in_place(MatrixView m, const Signature& j) {
  require(m.rows == j.order(), "scale_rows: order mismatch");
  for (std::size_t c = 0; c < m.cols; ++c) {
    Complex* col = m.data + c * m.stride;
    for (const auto& b : j.neg_blocks()) {
      for (std::size_t i = b.start; i < b.start + b.length; ++i) col[i] = -col[i];
    }
  }
}

Eig2 hermitian_eig2(double a, Complex b, double c) {
  const double ab = std::abs(b);
  if (ab == 0.0) return {a, c, Rotation2::identity()};
  // Remove the phase of b, then apply the real symmetric Schur rotation.
  const Complex e = b / ab;
  const double zeta = (c - a) / (2.0 * ab);
  double t = 0.0;
  if (std::abs(zeta) > 1e150) {
    t = 0.5 / zeta;
  } else {
    t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  }
  const double cs = 1.0 / std::sqrt(1.0 + t * t);
  const double sn = t * cs;
  const Complex ec = std::conj(e);
  return {a - t * ab, c + t * ab, Rotation2{Complex(cs), Complex(sn), -ec * sn, ec * cs}};
}

ComplexMatrix scale_rows(const ComplexMatrix& m, const Signature& j) {
  ComplexMatrix out = copy_of(m.view());
  scale_rows_in_place(out.view(), j);
  return out;
}

}  // namespace ghsvd
