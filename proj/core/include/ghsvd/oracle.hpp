#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ghsvd/matrix.hpp"

namespace ghsvd {

/// Reference solution of H z = lambda S z: Cholesky S = L L^*, cyclic
/// complex Jacobi on L^{-1} H L^{-*}, Z = L^{-*} Q.  lambda is ascending.
struct OracleResult {
  std::vector<double> lambda;
  ComplexMatrix Z;
  std::size_t sweeps = 0;
};

/// Throws IndefiniteMetric when the Cholesky factorization of S breaks down.
OracleResult oracle_solve(const ComplexMatrix& h, const ComplexMatrix& s);

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi; `q` receives the
/// eigenvectors when non-null.  Ascending order.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a, ComplexMatrix* q = nullptr,
                                          std::size_t* sweeps = nullptr);

struct Comparison {
  double max_rel = 0.0;
  std::size_t worst = 0;
  bool pass = true;
};

/// Sorts both multisets and reports max |a_i - b_i| / |b_i| (absolute where
/// b_i == 0).
Comparison compare(std::span<const double> values, std::span<const double> reference, double tol);

}  // namespace ghsvd
