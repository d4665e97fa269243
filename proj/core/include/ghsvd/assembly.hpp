#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ghsvd/matrix.hpp"

namespace ghsvd {

/// Per-atom inputs.  A and B are N_L x N_G, U is a real diagonal of length
/// N_L, T_AA and T_BB are Hermitian N_L x N_L, T_AB is general N_L x N_L.
struct AtomBlock {
  ComplexMatrix A;
  ComplexMatrix B;
  std::vector<double> U;
  ComplexMatrix T_AA;
  ComplexMatrix T_BB;
  ComplexMatrix T_AB;

  std::size_t n_l() const noexcept { return A.rows(); }
  std::size_t n_g() const noexcept { return A.cols(); }
};

/// Shapes agree and T_AA, T_BB are Hermitian to 8 eps componentwise.
void validate(const AtomBlock& atom);

/// (H, S) = (F^* J F, G^* G), never formed unless asked for.
struct FactoredPencil {
  ComplexMatrix F;
  Signature J;
  ComplexMatrix G;

  std::size_t rows() const noexcept { return F.rows(); }
  std::size_t cols() const noexcept { return F.cols(); }
};

void validate(const FactoredPencil& p);

/// T = M^* J M.  M has `rank` rows and order(T) columns; J is sorted with
/// the positive entries first.
struct HebpjResult {
  ComplexMatrix M;
  Signature J;
  std::size_t rank = 0;
  std::size_t two_by_two = 0;
};

/// [[T_AA, T_AB], [T_AB^*, T_BB]], built from its upper triangle.
ComplexMatrix build_T(const AtomBlock& atom);

/// Hermitian indefinite factorization with Bunch-Parlett complete pivoting.
/// Pivots with magnitude at most order * eps * max|T| end the elimination;
/// the remaining rows are dropped and reported through `rank`.
HebpjResult hebpj(const ComplexMatrix& t);

/// Stacks the per-atom factors.  Atoms are processed by `workers` threads;
/// the result does not depend on the worker count.
FactoredPencil assemble(std::span<const AtomBlock> atoms, std::size_t workers = 1);

struct HermitianPair {
  ComplexMatrix H;
  ComplexMatrix S;
};

/// Explicit H = F^* (J F) and S = G^* G.
HermitianPair form_HS(const FactoredPencil& p);

}  // namespace ghsvd
