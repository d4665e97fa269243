#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "ghsvd/hz_kernel.hpp"
#include "ghsvd/kernel.hpp"
#include "ghsvd/matrix.hpp"
#include "ghsvd/strategy.hpp"

namespace ghsvd {

class WorkerPool;

/// VP is the pointwise (Level 1) method; BO and FB are the blocked (Level 2)
/// variants with one inner sweep per block pivot or inner sweeps to
/// convergence.
enum class Variant { VP, BO, FB };

struct HZConfig {
  Variant variant = Variant::VP;
  /// Pointwise ordering for VP; block ordering for BO and FB.
  StrategyClass strategy = StrategyClass::ME;
  /// Ordering used inside a block pivot.
  StrategyClass inner_strategy = StrategyClass::MM;
  std::size_t c_max = 30;
  double eps = std::numeric_limits<double>::epsilon();
  std::size_t workers = 1;
  Lanes lanes{};
  bool want_uv = true;
};

void validate(const HZConfig& cfg);

struct HZOutput {
  /// F Z', G Z' and Z' as left by the sweeps.
  ComplexMatrix Fc;
  ComplexMatrix Gc;
  ComplexMatrix Zc;

  std::vector<double> SigmaF;
  std::vector<double> SigmaG;
  std::vector<double> Sigma;
  /// Signed squared generalized hyperbolic singular values.
  std::vector<double> Lambda;
  std::vector<int> signs;
  /// Z' Sigma^{-1}.
  ComplexMatrix Z;
  ComplexMatrix U;
  ComplexMatrix V;

  std::size_t sweeps = 0;
  std::size_t inner_sweeps = 0;
  std::size_t big_count = 0;
  std::size_t all_count = 0;
  bool converged = false;
};

struct Bordered {
  ComplexMatrix F;
  ComplexMatrix G;
  ComplexMatrix Z;
  Signature J;
};

/// Appends a zero row and column with a unit corner to F, G and Z, and a
/// +1 to J.
Bordered border(const ComplexMatrix& f, const ComplexMatrix& g, const ComplexMatrix& z, const Signature& j);

/// Pointwise sweeps.  Odd orders are bordered internally and the extra
/// column is removed from the result.  `strategy`, when given, must match
/// the (bordered) order.
HZOutput hz_level1(const ComplexMatrix& f, const ComplexMatrix& g, const Signature& j, const HZConfig& cfg,
                   const Strategy* strategy = nullptr);

/// Blocked sweeps over 2 * workers block columns.  Requires n > 2 * workers.
HZOutput hz_level2(const ComplexMatrix& f, const ComplexMatrix& g, const Signature& j, const HZConfig& cfg);

/// Level 1 for VP, or when n <= 2 * workers; Level 2 otherwise.
HZOutput hz_solve(const ComplexMatrix& f, const ComplexMatrix& g, const Signature& j, const HZConfig& cfg);

/// Fills the singular values, Lambda, Z and (optionally) U, V from Fc, Gc, Zc.
void finalize_outputs(HZOutput& out, const Signature& j, bool want_uv = true, Lanes lanes = {});

}  // namespace ghsvd
