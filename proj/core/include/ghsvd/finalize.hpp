#pragma once

#include <cstddef>
#include <span>

#include "ghsvd/matrix.hpp"

namespace ghsvd {

/// Z = P^T L U Q^T, i.e. Z(P[i], Q[j]) = (L U)(i, j).
struct LuCp {
  ComplexMatrix L;
  ComplexMatrix Uu;
  Permutation P;
  Permutation Q;
  std::size_t order = 0;
  /// Pivots raised to the n * eps * max|Z| floor.
  std::size_t perturbed = 0;
};

/// LU with complete pivoting; ties go to the smallest (row, col).
LuCp lu_complete(const ComplexMatrix& z);

/// Z^{-1}, one column solve per column of the identity.
ComplexMatrix invert(const LuCp& lu, std::size_t workers = 1);

/// max |Uu_ii| / min |Uu_ii|.
double kappa_proxy(const LuCp& lu);

struct Residuals {
  double err_f = 0.0;
  double err_g = 0.0;
};

/// ||F - U diag(sigma_f) X||_F / ||F||_F and the same for G.
Residuals residuals(const ComplexMatrix& f, const ComplexMatrix& g, const ComplexMatrix& u, const ComplexMatrix& v,
                    std::span<const double> sigma_f, std::span<const double> sigma_g, const ComplexMatrix& x);

/// ||H Z - S Z diag(lambda)||_F / (||H||_F ||Z||_F).
double eigen_residual(const ComplexMatrix& h, const ComplexMatrix& s, const ComplexMatrix& z,
                      std::span<const double> lambda);

}  // namespace ghsvd
