#include "ghsvd/assembly.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ghsvd/dense.hpp"
#include "ghsvd/errors.hpp"
#include "ghsvd/kernel.hpp"
#include "ghsvd/parallel.hpp"

namespace ghsvd {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kAlpha = (1.0 + std::sqrt(17.0)) / 8.0;

bool hermitian_within(const ComplexMatrix& t, double tol) {
  if (t.rows() != t.cols()) return false;
  for (std::size_t j = 0; j < t.cols(); ++j) {
    for (std::size_t i = j; i < t.rows(); ++i) {
      const Complex a = t(i, j);
      const Complex b = std::conj(t(j, i));
      if (std::abs(a - b) > tol * std::max(std::abs(a), std::abs(b))) return false;
    }
  }
  return true;
}

// Symmetric interchange of indices k < d in a Hermitian matrix kept in its
// lower triangle.  Columns before k hold multipliers and swap as rows.
void sym_swap(ComplexMatrix& a, std::size_t k, std::size_t d) {
  if (k == d) return;
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < k; ++j) std::swap(a(k, j), a(d, j));
  std::swap(a(k, k), a(d, d));
  for (std::size_t j = k + 1; j < d; ++j) {
    const Complex t = a(j, k);
    a(j, k) = std::conj(a(d, j));
    a(d, j) = std::conj(t);
  }
  a(d, k) = std::conj(a(d, k));
  for (std::size_t i = d + 1; i < n; ++i) std::swap(a(i, k), a(i, d));
}

struct Pivot {
  std::size_t k = 0;
  std::size_t size = 1;
  double d = 0.0;
  Eig2 eig;
};

}  // namespace

void validate(const AtomBlock& atom) {
  const std::size_t nl = atom.n_l();
  require(atom.B.rows() == nl && atom.B.cols() == atom.n_g(), "AtomBlock: B must match A in shape");
  require(atom.U.size() == nl, "AtomBlock: U must have N_L entries");
  require(atom.T_AA.rows() == nl && atom.T_AA.cols() == nl, "AtomBlock: T_AA must be N_L x N_L");
  require(atom.T_BB.rows() == nl && atom.T_BB.cols() == nl, "AtomBlock: T_BB must be N_L x N_L");
  require(atom.T_AB.rows() == nl && atom.T_AB.cols() == nl, "AtomBlock: T_AB must be N_L x N_L");
  require(hermitian_within(atom.T_AA, 8.0 * kEps), "AtomBlock: T_AA is not Hermitian");
  require(hermitian_within(atom.T_BB, 8.0 * kEps), "AtomBlock: T_BB is not Hermitian");
}

void validate(const FactoredPencil& p) {
  require(p.J.order() == p.F.rows() && p.F.rows() == p.G.rows(), "FactoredPencil: row counts differ");
  require(p.F.cols() == p.G.cols(), "FactoredPencil: column counts differ");
}

ComplexMatrix build_T(const AtomBlock& atom) {
  const std::size_t nl = atom.T_AA.rows();
  require(atom.T_AA.cols() == nl && atom.T_BB.rows() == nl && atom.T_BB.cols() == nl &&
              atom.T_AB.rows() == nl && atom.T_AB.cols() == nl,
          "build_T: inconsistent block orders");
  const std::size_t n = 2 * nl;
  ComplexMatrix t(n, n);
  for (std::size_t j = 0; j < nl; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      t(i, j) = atom.T_AA(i, j);
      t(nl + i, nl + j) = atom.T_BB(i, j);
    }
    for (std::size_t i = 0; i < nl; ++i) t(i, nl + j) = atom.T_AB(i, j);
  }
  for (std::size_t j = 0; j < n; ++j) {
    t(j, j) = Complex(t(j, j).real(), 0.0);
    for (std::size_t i = j + 1; i < n; ++i) t(i, j) = std::conj(t(j, i));
  }
  return t;
}

HebpjResult hebpj(const ComplexMatrix& t) {
  require(t.rows() == t.cols(), "hebpj: matrix must be square");
  const std::size_t n = t.rows();
  HebpjResult out;
  if (n == 0) return out;

  ComplexMatrix a(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    a(j, j) = Complex(t(j, j).real(), 0.0);
    for (std::size_t i = j + 1; i < n; ++i) a(i, j) = t(i, j);
  }
  const double tol = static_cast<double>(n) * kEps * max_abs(t.view());
  Permutation perm = identity_permutation(n);
  std::vector<Pivot> pivots;
  const auto lda = static_cast<int>(a.stride());

  std::size_t k = 0;
  while (k < n) {
    // Squared magnitudes throughout the search.
    double mu0 = -1.0, mu1 = -1.0;
    std::size_t r = k, s = k, dmax = k;
    for (std::size_t j = k; j < n; ++j) {
      const double dj = a(j, j).real() * a(j, j).real();
      if (dj > mu1) {
        mu1 = dj;
        dmax = j;
      }
      for (std::size_t i = j; i < n; ++i) {
        const double v = std::norm(a(i, j));
        if (v > mu0) {
          mu0 = v;
          r = i;
          s = j;
        }
      }
    }
    if (mu0 <= tol * tol) break;

    if (mu1 >= kAlpha * kAlpha * mu0) {
      sym_swap(a, k, dmax);
      std::swap(perm[k], perm[dmax]);
      const double d = a(k, k).real();
      const std::size_t rest = n - k - 1;
      if (rest > 0) {
        cblas_zher(CblasColMajor, CblasLower, static_cast<int>(rest), -1.0 / d, &a(k + 1, k), 1,
                   &a(k + 1, k + 1), lda);
        for (std::size_t i = k + 1; i < n; ++i) a(i, k) /= d;
      }
      pivots.push_back({k, 1, d, {}});
      k += 1;
      continue;
    }

    // 2x2 pivot on the largest off-diagonal entry (r > s).
    sym_swap(a, k, s);
    std::swap(perm[k], perm[s]);
    if (r == k) r = s;
    sym_swap(a, k + 1, r);
    std::swap(perm[k + 1], perm[r]);
    const double e11 = a(k, k).real();
    const double e22 = a(k + 1, k + 1).real();
    const Complex e21 = a(k + 1, k);
    const double det = e11 * e22 - std::norm(e21);
    const std::size_t rest = n - k - 2;
    if (rest > 0) {
      // X = W E^{-1}; trailing -= W E^{-1} W^* = (W X^* + X W^*) / 2.
      ComplexMatrix x(rest, 2);
      for (std::size_t i = 0; i < rest; ++i) {
        const Complex w1 = a(k + 2 + i, k);
        const Complex w2 = a(k + 2 + i, k + 1);
        x(i, 0) = (w1 * e22 - w2 * e21) / det;
        x(i, 1) = (w2 * e11 - w1 * std::conj(e21)) / det;
      }
      const Complex half(-0.5, 0.0);
      cblas_zher2k(CblasColMajor, CblasLower, CblasNoTrans, static_cast<int>(rest), 2, &half, &a(k + 2, k), lda,
                   x.data(), static_cast<int>(x.stride()), 1.0, &a(k + 2, k + 2), lda);
      for (std::size_t i = 0; i < rest; ++i) {
        a(k + 2 + i, k) = x(i, 0);
        a(k + 2 + i, k + 1) = x(i, 1);
      }
    }
    pivots.push_back({k, 2, 0.0, hermitian_eig2(e11, std::conj(e21), e22)});
    out.two_by_two += 1;
    k += 2;
  }
  const std::size_t rank = k;

  // Rows of L^*, scaled, in pivot order.
  ComplexMatrix m(rank, n);
  std::vector<int> sign(rank, 1);
  for (const Pivot& p : pivots) {
    if (p.size == 1) {
      const double sc = std::sqrt(std::abs(p.d));
      m(p.k, p.k) = sc;
      for (std::size_t i = p.k + 1; i < n; ++i) m(p.k, i) = sc * std::conj(a(i, p.k));
      sign[p.k] = p.d > 0.0 ? 1 : -1;
      continue;
    }
    // diag(sqrt|l|) R^* applied to the two rows of L^*.
    const Rotation2 ra = p.eig.r.adjoint();
    const double s1 = std::sqrt(std::abs(p.eig.l1));
    const double s2 = std::sqrt(std::abs(p.eig.l2));
    const std::size_t k0 = p.k, k1 = p.k + 1;
    auto row = [&](std::size_t c, std::size_t i) -> Complex {
      if (i == c) return 1.0;
      if (i < k0 + 2) return 0.0;
      return std::conj(a(i, c));
    };
    for (std::size_t i = k0; i < n; ++i) {
      const Complex r0 = row(k0, i), r1 = row(k1, i);
      m(k0, i) = s1 * (ra.z11 * r0 + ra.z12 * r1);
      m(k1, i) = s2 * (ra.z21 * r0 + ra.z22 * r1);
    }
    sign[k0] = p.eig.l1 > 0.0 ? 1 : -1;
    sign[k1] = p.eig.l2 > 0.0 ? 1 : -1;
  }

  // Fold the permutation into the columns, then sort rows by sign.  Dropped
  // rows become zero rows with a +1 sign, placed after the positive rows.
  std::vector<std::size_t> order(rank);
  std::iota(order.begin(), order.end(), 0);
  std::stable_partition(order.begin(), order.end(), [&](std::size_t i) { return sign[i] > 0; });
  const auto positives = static_cast<std::size_t>(std::count(sign.begin(), sign.end(), 1));
  out.M = ComplexMatrix(n, n);
  for (std::size_t dst = 0; dst < rank; ++dst) {
    const std::size_t src = order[dst];
    const std::size_t row = dst < positives ? dst : dst + (n - rank);
    for (std::size_t i = 0; i < n; ++i) out.M(row, perm[i]) = m(src, i);
  }
  out.J = Signature::sorted(positives + (n - rank), n);
  out.rank = rank;
  return out;
}

FactoredPencil assemble(std::span<const AtomBlock> atoms, std::size_t workers) {
  require(!atoms.empty(), "assemble: no atoms");
  const std::size_t nl = atoms.front().n_l();
  const std::size_t ng = atoms.front().n_g();
  for (const auto& atom : atoms) {
    require(atom.n_l() == nl && atom.n_g() == ng, "assemble: atoms differ in N_L or N_G");
    validate(atom);
  }
  const std::size_t block = 2 * nl;
  const std::size_t m = block * atoms.size();
  FactoredPencil out{ComplexMatrix(m, ng), Signature{}, ComplexMatrix(m, ng)};
  std::vector<Signature> signs(atoms.size());

  WorkerPool pool(workers);
  pool.for_each(atoms.size(), [&](std::size_t a, std::size_t) {
    const AtomBlock& atom = atoms[a];
    HebpjResult f = hebpj(build_T(atom));
    ComplexMatrix h(block, ng);
    for (std::size_t j = 0; j < ng; ++j) {
      for (std::size_t i = 0; i < nl; ++i) {
        h(i, j) = atom.A(i, j);
        h(nl + i, j) = atom.B(i, j);
        out.G(a * block + i, j) = atom.A(i, j);
        out.G(a * block + nl + i, j) = atom.U[i] * atom.B(i, j);
      }
    }
    MatrixView dst{&out.F(a * block, 0), block, ng, out.F.stride()};
    gemm(Op::None, Op::None, 1.0, f.M.view(), h.view(), 0.0, dst);
    signs[a] = std::move(f.J);
  });
  out.J = Signature::concat(signs);
  return out;
}

HermitianPair form_HS(const FactoredPencil& p) {
  validate(p);
  HermitianPair out;
  const ComplexMatrix jf = scale_rows(p.F, p.J);
  out.H = ComplexMatrix(p.cols(), p.cols());
  gemm(Op::Adjoint, Op::None, 1.0, p.F.view(), jf.view(), 0.0, out.H.view());
  make_hermitian(out.H);
  out.S = gram_matrix(p.G.view());
  make_hermitian(out.S);
  return out;
}

}  // namespace ghsvd
