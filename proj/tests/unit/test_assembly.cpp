#include <gtest/gtest.h>

#include <cmath>

#include "ghsvd/assembly.hpp"
#include "ghsvd/errors.hpp"
#include "ghsvd/generator.hpp"
#include "reference.hpp"

using namespace ghsvd;

namespace {

double hebpj_error(const ComplexMatrix& t, const HebpjResult& r) {
  const auto d = decode_signature(r.J);
  return ref::rel_diff(ref::jgram(r.M, d), t);
}

AtomBlock random_atom(std::size_t nl, std::size_t ng, Rng& rng) {
  AtomBlock a;
  a.A = random_matrix(nl, ng, rng);
  a.B = random_matrix(nl, ng, rng);
  a.U.resize(nl);
  for (auto& u : a.U) u = rng.uniform(0.5, 1.5);
  a.T_AA = random_hermitian(nl, rng);
  a.T_BB = random_hermitian(nl, rng);
  a.T_AB = random_matrix(nl, nl, rng);
  return a;
}

// H_a = [A; B] and sum_a H_a^* T_a H_a, by plain loops.
ComplexMatrix direct_H(const std::vector<AtomBlock>& atoms) {
  const std::size_t ng = atoms.front().n_g();
  ComplexMatrix h(ng, ng);
  for (const auto& a : atoms) {
    const std::size_t nl = a.n_l();
    ComplexMatrix ha(2 * nl, ng);
    for (std::size_t j = 0; j < ng; ++j)
      for (std::size_t i = 0; i < nl; ++i) {
        ha(i, j) = a.A(i, j);
        ha(nl + i, j) = a.B(i, j);
      }
    const ComplexMatrix t = build_T(a);
    const ComplexMatrix part = ref::product(ha, ref::product(t, ha), true);
    for (std::size_t j = 0; j < ng; ++j)
      for (std::size_t i = 0; i < ng; ++i) h(i, j) += part(i, j);
  }
  return h;
}

ComplexMatrix direct_S(const std::vector<AtomBlock>& atoms) {
  const std::size_t ng = atoms.front().n_g();
  ComplexMatrix s(ng, ng);
  for (const auto& a : atoms) {
    ComplexMatrix ub = a.B;
    for (std::size_t j = 0; j < ng; ++j)
      for (std::size_t i = 0; i < a.n_l(); ++i) ub(i, j) *= a.U[i];
    const ComplexMatrix p1 = ref::gram(a.A), p2 = ref::gram(ub);
    for (std::size_t j = 0; j < ng; ++j)
      for (std::size_t i = 0; i < ng; ++i) s(i, j) += p1(i, j) + p2(i, j);
  }
  return s;
}

}  // namespace

TEST(BuildT, ZeroBlocks) {
  AtomBlock a;
  a.A = ComplexMatrix(2, 3);
  a.B = ComplexMatrix(2, 3);
  a.U = {0.0, 0.0};
  a.T_AA = ComplexMatrix(2, 2);
  a.T_BB = ComplexMatrix(2, 2);
  a.T_AB = ComplexMatrix(2, 2);
  EXPECT_EQ(ref::frob(build_T(a)), 0.0);
}

TEST(BuildT, IdentityBlocks) {
  AtomBlock a;
  a.A = ComplexMatrix(3, 2);
  a.B = ComplexMatrix(3, 2);
  a.U = {1, 1, 1};
  a.T_AA = ComplexMatrix::identity(3);
  a.T_BB = ComplexMatrix::identity(3);
  a.T_AB = ComplexMatrix(3, 3);
  EXPECT_TRUE(ref::equal(build_T(a), ComplexMatrix::identity(6)));
}

TEST(BuildT, RandomIsExactlyHermitian) {
  Rng rng(3);
  const ComplexMatrix t = build_T(random_atom(3, 4, rng));
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(t(i, j), std::conj(t(j, i)));
}

TEST(BuildT, ShapeMismatch) {
  Rng rng(4);
  AtomBlock a = random_atom(3, 4, rng);
  a.T_AB = ComplexMatrix(2, 2);
  EXPECT_THROW(build_T(a), ContractViolation);
}

TEST(Validate, RejectsNonHermitianDiagonalBlock) {
  Rng rng(5);
  AtomBlock a = random_atom(3, 4, rng);
  a.T_AA(0, 1) += 1e-3;
  EXPECT_THROW(validate(a), ContractViolation);
}

TEST(Hebpj, Identity) {
  const HebpjResult r = hebpj(ComplexMatrix::identity(5));
  EXPECT_EQ(r.rank, 5u);
  EXPECT_EQ(r.J, Signature::identity(5));
  EXPECT_LE(ref::rel_diff(ref::gram(r.M), ComplexMatrix::identity(5)), 4 * ref::kEps);
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(std::abs(r.M(i, j)), i == j ? 1.0 : 0.0, 4 * ref::kEps);
}

TEST(Hebpj, DiagonalIndefinite) {
  const double d[] = {2.0, -3.0};
  const HebpjResult r = hebpj(ref::diag_matrix(d));
  EXPECT_EQ(decode_signature(r.J), (std::vector<std::int8_t>{1, -1}));
  EXPECT_NEAR(std::abs(r.M(0, 0)), std::sqrt(2.0), 4 * ref::kEps);
  EXPECT_NEAR(std::abs(r.M(1, 1)), std::sqrt(3.0), 4 * ref::kEps);
  EXPECT_EQ(std::abs(r.M(0, 1)), 0.0);
  EXPECT_EQ(std::abs(r.M(1, 0)), 0.0);
}

TEST(Hebpj, TwoByTwoPivot) {
  const ComplexMatrix t = ref::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  const HebpjResult r = hebpj(t);
  EXPECT_EQ(r.two_by_two, 1u);
  EXPECT_EQ(decode_signature(r.J), (std::vector<std::int8_t>{1, -1}));
  EXPECT_LE(hebpj_error(t, r), 32 * ref::kEps);
}

TEST(Hebpj, RandomReconstruction) {
  Rng rng(6);
  for (std::size_t n : {1u, 2u, 3u, 8u, 17u, 40u, 98u}) {
    const ComplexMatrix t = random_hermitian(n, rng);
    const HebpjResult r = hebpj(t);
    EXPECT_EQ(r.rank, n);
    EXPECT_TRUE(r.J.n_plus().has_value());
    EXPECT_LE(hebpj_error(t, r), 100.0 * n * n * ref::kEps) << "n=" << n;
  }
}

TEST(Hebpj, SignatureMatchesInertia) {
  Rng rng(7);
  const ComplexMatrix t = random_hermitian(30, rng);
  const auto ev = ref::eigenvalues(t);
  std::size_t negative = 0;
  for (double v : ev) negative += v < 0.0;
  EXPECT_EQ(hebpj(t).J.negative_count(), negative);
}

TEST(Hebpj, RankDeficientDropsRows) {
  Rng rng(8);
  const ComplexMatrix x = random_matrix(3, 6, rng);
  const ComplexMatrix t = ref::product(x, x, true);  // rank 3, order 6
  const HebpjResult r = hebpj(t);
  EXPECT_EQ(r.rank, 3u);
  EXPECT_EQ(r.M.rows(), 6u);
  EXPECT_LE(hebpj_error(t, r), 100.0 * 36 * ref::kEps);
}

TEST(Hebpj, ZeroMatrix) {
  const HebpjResult r = hebpj(ComplexMatrix(4, 4));
  EXPECT_EQ(r.rank, 0u);
  EXPECT_EQ(ref::frob(r.M), 0.0);
}

TEST(Assemble, SingleTrivialAtom) {
  AtomBlock a;
  a.A = ComplexMatrix::identity(3);
  a.B = ComplexMatrix(3, 3);
  a.U = {1, 1, 1};
  a.T_AA = ComplexMatrix::identity(3);
  a.T_BB = ComplexMatrix::identity(3);
  a.T_AB = ComplexMatrix(3, 3);
  const FactoredPencil p = assemble(std::vector<AtomBlock>{a});
  EXPECT_EQ(p.J, Signature::identity(6));
  ASSERT_EQ(p.rows(), 6u);
  ASSERT_EQ(p.cols(), 3u);
  EXPECT_LE(ref::rel_diff(ref::gram(p.F), ComplexMatrix::identity(3)), 4 * ref::kEps);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 6; ++i) {
      EXPECT_EQ(p.G(i, j), i == j ? Complex(1.0) : Complex(0.0));
      if (i >= 3) EXPECT_EQ(p.F(i, j), Complex(0.0));
    }
}

TEST(Assemble, GrammiansMatchDirectEvaluation) {
  Rng rng(9);
  std::vector<AtomBlock> atoms;
  for (int a = 0; a < 2; ++a) atoms.push_back(random_atom(2, 3, rng));
  const FactoredPencil p = assemble(atoms);
  EXPECT_EQ(p.rows(), 8u);
  EXPECT_EQ(p.cols(), 3u);
  EXPECT_LE(ref::rel_diff(ref::jgram(p.F, decode_signature(p.J)), direct_H(atoms)), 1e-12);
  EXPECT_LE(ref::rel_diff(ref::gram(p.G), direct_S(atoms)), 1e-12);
}

TEST(Assemble, LargerRandomAndWorkerIndependence) {
  Rng rng(10);
  std::vector<AtomBlock> atoms;
  for (int a = 0; a < 5; ++a) atoms.push_back(random_atom(6, 11, rng));
  const FactoredPencil p1 = assemble(atoms, 1);
  const FactoredPencil p3 = assemble(atoms, 3);
  EXPECT_TRUE(bitwise_equal(p1.F, p3.F));
  EXPECT_TRUE(bitwise_equal(p1.G, p3.G));
  EXPECT_EQ(p1.J, p3.J);
  EXPECT_LE(ref::rel_diff(ref::jgram(p1.F, decode_signature(p1.J)), direct_H(atoms)), 1e-10);
  EXPECT_LE(ref::rel_diff(ref::gram(p1.G), direct_S(atoms)), 1e-10);
  for (int a = 0; a < 5; ++a) EXPECT_TRUE(p1.J.slice(12 * a, 12).n_plus().has_value());
}

TEST(Assemble, ZeroUGivesZeroLowerHalf) {
  Rng rng(11);
  AtomBlock a = random_atom(3, 4, rng);
  std::fill(a.U.begin(), a.U.end(), 0.0);
  const FactoredPencil p = assemble(std::vector<AtomBlock>{a});
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 3; i < 6; ++i) EXPECT_EQ(p.G(i, j), Complex(0.0));
}

TEST(Assemble, AtomOrderPermutesRowBlocks) {
  Rng rng(12);
  std::vector<AtomBlock> atoms{random_atom(2, 3, rng), random_atom(2, 3, rng)};
  const FactoredPencil p = assemble(atoms);
  std::swap(atoms[0], atoms[1]);
  const FactoredPencil q = assemble(atoms);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_EQ(p.F(i, j), q.F(i + 4, j));
      EXPECT_EQ(p.G(i + 4, j), q.G(i, j));
    }
  EXPECT_EQ(p.J.slice(0, 4), q.J.slice(4, 4));
}

TEST(FormHS, Trivial) {
  const FactoredPencil p{ComplexMatrix::identity(3), Signature::identity(3), ComplexMatrix::identity(3)};
  const HermitianPair hs = form_HS(p);
  EXPECT_TRUE(ref::equal(hs.H, ComplexMatrix::identity(3)));
  EXPECT_TRUE(ref::equal(hs.S, ComplexMatrix::identity(3)));
  const FactoredPencil n{ComplexMatrix::identity(3), Signature::sorted(0, 3), ComplexMatrix::identity(3)};
  EXPECT_EQ(form_HS(n).H(1, 1), Complex(-1.0));
}

TEST(FormHS, MatchesTripleLoop) {
  Rng rng(13);
  const auto d = ref::random_signs(40, rng);
  const FactoredPencil p{random_matrix(40, 10, rng), encode_signature(d), random_matrix(40, 10, rng)};
  const HermitianPair hs = form_HS(p);
  EXPECT_LE(ref::rel_diff(hs.H, ref::jgram(p.F, d)), 1e-13);
  EXPECT_LE(ref::rel_diff(hs.S, ref::gram(p.G)), 1e-13);
}

TEST(FormHS, ShapeMismatch) {
  const FactoredPencil p{ComplexMatrix(4, 2), Signature::identity(3), ComplexMatrix(4, 2)};
  EXPECT_THROW(form_HS(p), ContractViolation);
}
