#include <gtest/gtest.h>

#include <cmath>

#include "ghsvd/finalize.hpp"
#include "ghsvd/generator.hpp"
#include "ghsvd/hz.hpp"
#include "reference.hpp"

using namespace ghsvd;

namespace {

// P^T L U Q^T, i.e. Z(P[i], Q[j]) = (L U)(i, j).
ComplexMatrix reassemble(const LuCp& lu) {
  const ComplexMatrix lu_prod = ref::product(lu.L, lu.Uu);
  ComplexMatrix z(lu.order, lu.order);
  for (std::size_t j = 0; j < lu.order; ++j)
    for (std::size_t i = 0; i < lu.order; ++i) z(lu.P[i], lu.Q[j]) = lu_prod(i, j);
  return z;
}

ComplexMatrix prepermute_cols(const ComplexMatrix& a, const Permutation& p) {
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, p[j]);
  return out;
}

ComplexMatrix minus_identity(ComplexMatrix a) {
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) -= 1.0;
  return a;
}

}  // namespace

TEST(LuComplete, Identity) {
  const LuCp lu = lu_complete(ComplexMatrix::identity(4));
  EXPECT_TRUE(ref::equal(lu.L, ComplexMatrix::identity(4)));
  EXPECT_TRUE(ref::equal(lu.Uu, ComplexMatrix::identity(4)));
  EXPECT_EQ(lu.P, identity_permutation(4));
  EXPECT_EQ(lu.Q, identity_permutation(4));
  EXPECT_EQ(lu.perturbed, 0u);
}

TEST(LuComplete, PermutationMatrix) {
  const Permutation perm{2, 0, 3, 1};
  ComplexMatrix z(4, 4);
  for (std::size_t j = 0; j < 4; ++j) z(perm[j], j) = j % 2 ? -1.0 : 1.0;
  const LuCp lu = lu_complete(z);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(std::abs(lu.Uu(i, i)), 1.0);
    for (std::size_t j = 0; j < 4; ++j) {
      if (i != j) EXPECT_EQ(lu.Uu(i, j), Complex(0.0));
      if (i != j) EXPECT_EQ(lu.L(i, j), Complex(0.0));
    }
  }
  EXPECT_TRUE(ref::equal(reassemble(lu), z));
}

TEST(LuComplete, RandomReassembly) {
  Rng rng(1);
  const ComplexMatrix z = random_matrix(50, 50, rng);
  const LuCp lu = lu_complete(z);
  EXPECT_LE(ref::rel_diff(reassemble(lu), z), 1e-13);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_EQ(lu.L(i, i), Complex(1.0));
    for (std::size_t j = 0; j < i; ++j) {
      EXPECT_LE(std::abs(lu.L(i, j)), 1.0);
      EXPECT_EQ(lu.Uu(i, j), Complex(0.0));
    }
  }
}

TEST(LuComplete, TiesGoToSmallestIndex) {
  ComplexMatrix z(2, 2);
  z(0, 0) = 1.0;
  z(0, 1) = -1.0;
  z(1, 0) = 1.0;
  z(1, 1) = 1.0;
  const LuCp lu = lu_complete(z);
  EXPECT_EQ(lu.P[0], 0u);
  EXPECT_EQ(lu.Q[0], 0u);
}

TEST(LuComplete, SingularPivotIsPerturbed) {
  ComplexMatrix z(3, 3);
  z(0, 0) = 1.0;
  z(1, 1) = 1.0;
  const LuCp lu = lu_complete(z);
  EXPECT_EQ(lu.perturbed, 1u);
  EXPECT_GT(std::abs(lu.Uu(2, 2)), 0.0);
}

TEST(Invert, Trivial) {
  EXPECT_TRUE(ref::equal(invert(lu_complete(ComplexMatrix::identity(3))), ComplexMatrix::identity(3)));
  ComplexMatrix two = ComplexMatrix::identity(3);
  for (std::size_t i = 0; i < 3; ++i) two(i, i) = 2.0;
  const ComplexMatrix x = invert(lu_complete(two));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(x(i, i), Complex(0.5));
}

TEST(Invert, RandomTwoSided) {
  Rng rng(2);
  const ComplexMatrix z = random_matrix(64, 64, rng);
  const LuCp lu = lu_complete(z);
  const ComplexMatrix x = invert(lu);
  EXPECT_LE(ref::frob(minus_identity(ref::product(z, x))), 1e-11);
  EXPECT_LE(ref::frob(minus_identity(ref::product(x, z))), 100.0 * 64 * ref::kEps * kappa_proxy(lu) * 64);
  EXPECT_TRUE(bitwise_equal(invert(lu, 3), x));
}

TEST(KappaProxy, DiagonalRatio) {
  const double d[] = {4.0, 0.5, 2.0};
  EXPECT_DOUBLE_EQ(kappa_proxy(lu_complete(ref::diag_matrix(d))), 8.0);
}

TEST(Residuals, ExactFactorsGiveZero) {
  Rng rng(3);
  const ComplexMatrix f = random_matrix(5, 3, rng), g = random_matrix(5, 3, rng);
  const std::vector<double> ones(3, 1.0);
  const Residuals r = residuals(f, g, f, g, ones, ones, ComplexMatrix::identity(3));
  EXPECT_EQ(r.err_f, 0.0);
  EXPECT_EQ(r.err_g, 0.0);
}

TEST(Residuals, FirstOrderPerturbation) {
  Rng rng(4);
  const ComplexMatrix f = random_matrix(6, 4, rng), g = random_matrix(6, 4, rng);
  const std::vector<double> sf{0.6, 0.8, 0.28, 0.96}, sg{0.8, 0.6, 0.96, 0.28};
  const ComplexMatrix x = random_matrix(4, 4, rng);
  // U = F (Sigma_F X)^{-1} so the factorization is exact, then perturb one entry.
  ComplexMatrix sx = x;
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) sx(i, j) *= sf[i];
  const ComplexMatrix u = ref::product(f, invert(lu_complete(sx)));
  ComplexMatrix sgx = x;
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) sgx(i, j) *= sg[i];
  const ComplexMatrix v = ref::product(g, invert(lu_complete(sgx)));
  const Residuals exact = residuals(f, g, u, v, sf, sg, x);
  EXPECT_LE(exact.err_f, 1e-14);
  ComplexMatrix up = u;
  const double delta = 1e-7;
  up(2, 1) += delta;
  double row = 0.0;
  for (std::size_t j = 0; j < 4; ++j) row += std::norm(sx(1, j));
  const double want = delta * std::sqrt(row) / ref::frob(f);
  const Residuals r = residuals(f, g, up, v, sf, sg, x);
  EXPECT_NEAR(r.err_f, want, want * 1e-6);
  EXPECT_LE(r.err_g, 1e-14);
}

TEST(Residuals, PermutationInvariant) {
  Rng rng(5);
  const ComplexMatrix f = random_matrix(5, 3, rng), g = random_matrix(5, 3, rng);
  const ComplexMatrix u = random_matrix(5, 3, rng), v = random_matrix(5, 3, rng), x = random_matrix(3, 3, rng);
  const std::vector<double> sf{0.1, 0.2, 0.3}, sg{0.9, 0.8, 0.7};
  const Residuals a = residuals(f, g, u, v, sf, sg, x);
  const Permutation p{2, 0, 1};
  ComplexMatrix xp(3, 3);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 3; ++i) xp(i, j) = x(p[i], j);
  const std::vector<double> sfp{sf[2], sf[0], sf[1]}, sgp{sg[2], sg[0], sg[1]};
  const Residuals b = residuals(f, g, prepermute_cols(u, p), prepermute_cols(v, p), sfp, sgp, xp);
  EXPECT_NEAR(a.err_f, b.err_f, 1e-14);
  EXPECT_NEAR(a.err_g, b.err_g, 1e-14);
}

TEST(EigenResidual, Trivial) {
  const ComplexMatrix i3 = ComplexMatrix::identity(3);
  const std::vector<double> ones(3, 1.0);
  EXPECT_EQ(eigen_residual(i3, i3, i3, ones), 0.0);
  const double d[] = {1.0, 4.0};
  EXPECT_EQ(eigen_residual(ref::diag_matrix(d), ComplexMatrix::identity(2), ComplexMatrix::identity(2), d), 0.0);
}

TEST(EigenResidual, PipelineOutput) {
  GeneratorSpec spec;
  spec.n = 100;
  spec.neg = 30;
  const Dataset ds = generate(spec, 6);
  HZConfig cfg;
  const HZOutput out = hz_solve(ds.pencil->F, ds.pencil->G, ds.pencil->J, cfg);
  const ComplexMatrix h = ref::jgram(ds.pencil->F, decode_signature(ds.pencil->J));
  const ComplexMatrix s = ref::gram(ds.pencil->G);
  EXPECT_LE(eigen_residual(h, s, out.Z, out.Lambda), 1e-10);
  const ComplexMatrix x = invert(lu_complete(out.Z));
  const Residuals r = residuals(ds.pencil->F, ds.pencil->G, out.U, out.V, out.SigmaF, out.SigmaG, x);
  EXPECT_LE(r.err_f, 1e-11);
  EXPECT_LE(r.err_g, 1e-11);
}
