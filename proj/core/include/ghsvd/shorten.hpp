#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ghsvd/kernel.hpp"
#include "ghsvd/matrix.hpp"

namespace ghsvd {

class WorkerPool;

/// H(s) = I + tau s s^* J, acting on rows [offset, m) of a column of length m.
/// The leading `offset` entries of `s` are zero.
struct JReflector {
  std::size_t offset = 0;
  std::vector<Complex> s;
  double tau = 0.0;
};

enum class PivotKind { OneByOne, TwoByTwo };

/// Column interchanges are relative to the first column of the trailing block
/// and must be applied in order.
struct PivotChoice {
  PivotKind kind = PivotKind::OneByOne;
  std::vector<std::pair<std::size_t, std::size_t>> swaps;
};

/// Diagonal pivoting with a partial-pivoting fallback on the J-Grammian of
/// the trailing block.
PivotChoice pivot_select(ConstMatrixView fk, std::span<const std::int8_t> jk, Lanes lanes = {});
PivotChoice pivot_select(ConstMatrixView fk, const Signature& jk, Lanes lanes = {});

struct ReflectorResult {
  std::vector<Complex> s;
  double tau = 0.0;
  Complex c1{};
  /// Row to exchange with the first one before applying the reflector; `s`
  /// already refers to the exchanged column.
  std::optional<std::size_t> row_swap;
};

/// Reflector mapping f to -c1 e1 with |c1| = |f^* J f|^{1/2}.
/// Throws DegeneratePivot when f^* J f == 0.
ReflectorResult reflector(std::span<const Complex> f, std::span<const std::int8_t> jk, std::size_t step = 0,
                          Lanes lanes = {});

/// col <- col + tau s (s^* J col).
void apply_reflector(std::span<const Complex> s, double tau, std::span<const std::int8_t> jk, std::span<Complex> col,
                     Lanes lanes = {});

struct UrvPivot {
  Rotation2 rotation;
  JReflector first;
  JReflector second;
  Complex f11{}, f12{}, f21{}, f22{};
  std::vector<std::pair<std::size_t, std::size_t>> row_swaps;
};

/// Two-column URV step on a trailing block whose first two columns are the
/// pivot pair.  Row interchanges are applied to every column of `block` and
/// to `jk`; both reflectors are applied to the remaining columns.
UrvPivot urv_step(MatrixView block, std::span<std::int8_t> jk, std::size_t step = 0, Lanes lanes = {},
                  WorkerPool* pool = nullptr);

struct JqrResult {
  ComplexMatrix F;
  Signature J;
  Permutation col_perm;
  std::vector<std::pair<std::size_t, std::size_t>> row_swaps;
  std::vector<JReflector> reflectors;
  std::size_t two_by_two_count = 0;
  /// max |F_ij| / max |Ft_ij|.
  double pivot_growth = 0.0;
};

/// P1 Ft P2 = Q F with Q J-unitary and F square block upper triangular.
JqrResult jqr(const ComplexMatrix& ft, const Signature& jt, Lanes lanes = {}, WorkerPool* pool = nullptr);

/// Column j of the result is column perm[j] of g.
ComplexMatrix prepermute(const ComplexMatrix& g, std::span<const std::size_t> perm);

/// R factor of a Householder QR, with a real nonnegative diagonal.
ComplexMatrix tsqr(const ComplexMatrix& gp);

/// Experimental: column-pivoted QR of g; `perm` receives the column order.
ComplexMatrix tsqr_pivoted(const ComplexMatrix& gp, Permutation& perm);

}  // namespace ghsvd
