#include "ghsvd/hz_kernel.hpp"

#include <array>
#include <cmath>

#include "ghsvd/errors.hpp"

namespace ghsvd {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr std::size_t kBatch = 8;

// Selections whose NaN behaviour is part of the contract: the second
// argument wins when the first is NaN.
inline double lane_max(double a, double b) { return a > b ? a : b; }
inline double lane_min(double a, double b) { return a < b ? a : b; }

struct Scaled {
  double hpp, hqq, hre, him, sre, sim, dp, dq;
};

inline Scaled scale(const PivotBlock2& b) {
  const double dp = 1.0 / std::sqrt(b.s_pp);
  const double dq = 1.0 / std::sqrt(b.s_qq);
  const double dpq = dp * dq;
  return {b.h_pp * (dp * dp), b.h_qq * (dq * dq), b.h_pq.real() * dpq, b.h_pq.imag() * dpq,
          b.s_pq.real() * dpq,  b.s_pq.imag() * dpq, dp,                  dq};
}

struct Phase {
  double x, mx, e1r, e1i;
};

// x = |s_pq| and e1 = s_pq / x, with e1 = 1 when x == 0.
inline Phase phase(const Scaled& s) {
  const double x = std::sqrt(s.sre * s.sre + s.sim * s.sim);
  const double mx = lane_max(x / x, 0.0);
  return {x, mx, lane_min(s.sre / x, 1.0), lane_min(s.sim / x, 1.0) * mx};
}

struct Core {
  double z11r, z11i, z12r, z12i, z21r, z21i, z22r, z22i;
  double cphi, cpsi;
};

// General branch of the transformation.  x == 0 is absorbed by the NaN
// selections; h == v == 0 yields garbage and must be flagged by the caller.
inline Core core(const Scaled& s) {
  const auto [x, mx, e1r, e1i] = phase(s);
  const double t = std::sqrt((1.0 - x) * (1.0 + x));
  const double u = e1r * s.hre + e1i * s.him;
  const double v = e1r * s.him - e1i * s.hre;
  const double h = s.hqq - s.hpp;
  const double sigma = h >= 0.0 ? 1.0 : -1.0;
  const double rho = std::sqrt(h * h + 4.0 * (v * v));
  const double num = sigma * (2.0 * u - (s.hpp + s.hqq) * x);
  const double den = t * rho;
  const double r = std::sqrt(num * num + den * den);
  const double c2 = den / r;
  const double s2 = num / r;
  const double cg = std::abs(h) / rho;
  const double sg = (2.0 * sigma * v) / rho;
  const double tc = t * cg * c2;
  const double cphi = std::sqrt((1.0 + x * s2 + tc) * 0.5);
  const double cpsi = std::sqrt((1.0 - x * s2 + tc) * 0.5);
  const double ai = t * sg * c2;
  // e^{i alpha} sin(phi) and e^{-i beta} sin(psi).
  const double ka = 1.0 / (2.0 * cpsi);
  const double kb = 1.0 / (2.0 * cphi);
  const double ar = s2 - x;
  const double br = s2 + x;
  const double sa_r = (e1r * ar - e1i * ai) * ka;
  const double sa_i = (e1r * ai + e1i * ar) * ka;
  const double sb_r = (e1r * br - e1i * ai) * kb;
  const double sb_i = (-e1r * ai - e1i * br) * kb;
  const double it = 1.0 / t;
  const double fp = it * s.dp;
  const double fq = it * s.dq;
  return {cphi * fp, 0.0, sa_r * fp, sa_i * fp, -sb_r * fq, -sb_i * fq, cpsi * fq, 0.0, cphi, cpsi};
}

inline Transform2 from_core(const Core& c) {
  Transform2 out;
  out.Z = {Complex(c.z11r, c.z11i), Complex(c.z12r, c.z12i), Complex(c.z21r, c.z21i), Complex(c.z22r, c.z22i)};
  out.kind = (c.cphi == 1.0 && c.cpsi == 1.0) ? TransformKind::Small : TransformKind::Big;
  return out;
}

bool check_semantics() {
  volatile double zero = 0.0;
  const double nan = zero / zero;
  return lane_max(nan, 0.0) == 0.0 && lane_max(1.0, 0.0) == 1.0 && lane_min(nan, 1.0) == 1.0 &&
         lane_min(0.5, 1.0) == 0.5;
}

}  // namespace

bool lane_select_semantics_ok() {
  static const bool ok = check_semantics();
  return ok;
}

PivotBlock2 gram2(std::span<const Complex> fp, std::span<const Complex> fq, std::span<const Complex> gp,
                  std::span<const Complex> gq, const Signature& j, Lanes lanes) {
  require(fp.size() == fq.size() && gp.size() == gq.size(), "gram2: length mismatch");
  const Gram3 h = jgram3(fp, fq, j, lanes);
  const Gram3 s = gram3(gp, gq, lanes);
  if (!(s.pp > 0.0) || !(s.qq > 0.0)) throw IndefiniteMetric("gram2: a column of G has zero norm");
  return {h.pp, h.qq, h.pq, s.pp, s.qq, s.pq};
}

PivotBlock2 prescale(const PivotBlock2& b) {
  require(b.s_pp > 0.0 && b.s_qq > 0.0, "prescale: diagonal of S must be positive");
  const Scaled s = scale(b);
  return {s.hpp, s.hqq, Complex(s.hre, s.him), 1.0, 1.0, Complex(s.sre, s.sim)};
}

bool needs_transform(const PivotBlock2& b, std::size_t n, double eps) {
  const double tol = eps * std::sqrt(static_cast<double>(n));
  const double app = std::abs(b.h_pp), aqq = std::abs(b.h_qq);
  const double big = app > aqq ? app : aqq;
  const double small = app > aqq ? aqq : app;
  return std::abs(b.h_pq) >= (big * tol) * small || std::abs(b.s_pq) >= tol;
}

Transform2 compute_transform(const PivotBlock2& b) {
  if (!(b.s_pp > 0.0) || !(b.s_qq > 0.0)) throw IndefiniteMetric("compute_transform: S block is not positive");
  const Scaled s = scale(b);
  const auto [x, mx, e1r, e1i] = phase(s);
  if (!(x < 1.0)) throw IndefiniteMetric("compute_transform: S block is numerically singular");
  if (s.hre == 0.0 && s.him == 0.0 && x == 0.0) return {};

  const Complex e1(e1r, e1i);
  const double v = e1r * s.him - e1i * s.hre;
  if (s.hqq - s.hpp == 0.0 && v == 0.0) {
    const double a = kInvSqrt2 / std::sqrt(1.0 + x);
    const double c = kInvSqrt2 / std::sqrt(1.0 - x);
    Transform2 out;
    out.Z = {Complex(a * s.dp), -e1 * (c * s.dp), std::conj(e1) * (a * s.dq), Complex(c * s.dq)};
    out.kind = TransformKind::Big;
    return out;
  }
  return from_core(core(s));
}

void compute_transforms(std::span<const PivotBlock2> blocks, std::span<Transform2> out) {
  require(blocks.size() == out.size(), "compute_transforms: length mismatch");
  if (!lane_select_semantics_ok()) {
    for (std::size_t i = 0; i < blocks.size(); ++i) out[i] = compute_transform(blocks[i]);
    return;
  }
  std::array<Scaled, kBatch> sc{};
  std::array<Core, kBatch> co{};
  std::array<double, kBatch> flag{};
  for (std::size_t base = 0; base < blocks.size(); base += kBatch) {
    const std::size_t count = std::min(kBatch, blocks.size() - base);
    for (std::size_t l = 0; l < count; ++l) sc[l] = scale(blocks[base + l]);
    for (std::size_t l = 0; l < count; ++l) co[l] = core(sc[l]);
    for (std::size_t l = 0; l < count; ++l) {
      // 1 when h_pq = s_pq = 0 or when h = v = 0; also set for x >= 1.
      const Scaled& s = sc[l];
      const auto [x, mx, e1r, e1i] = phase(s);
      const double ha = std::sqrt(s.hre * s.hre + s.him * s.him);
      const double v = e1r * s.him - e1i * s.hre;
      const double h = s.hqq - s.hpp;
      const double ident = (1.0 - lane_max(ha / ha, 0.0)) * (1.0 - mx);
      const double hv = (1.0 - lane_max(v / v, 0.0)) * (1.0 - lane_max(h / h, 0.0));
      const double bad = x < 1.0 ? 0.0 : 1.0;
      flag[l] = ident + hv + bad;
    }
    for (std::size_t l = 0; l < count; ++l) {
      out[base + l] = flag[l] == 0.0 && blocks[base + l].s_pp > 0.0 && blocks[base + l].s_qq > 0.0
                          ? from_core(co[l])
                          : compute_transform(blocks[base + l]);
    }
  }
}

}  // namespace ghsvd
