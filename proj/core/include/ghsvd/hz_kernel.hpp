#pragma once

#include <cstddef>
#include <limits>
#include <span>

#include "ghsvd/kernel.hpp"
#include "ghsvd/matrix.hpp"

namespace ghsvd {

/// Entries of the 2x2 pivot blocks of H = F^* J F and S = G^* G.
struct PivotBlock2 {
  double h_pp = 0.0;
  double h_qq = 0.0;
  Complex h_pq{};
  double s_pp = 1.0;
  double s_qq = 1.0;
  Complex s_pq{};
};

enum class TransformKind { Identity, Small, Big };

struct Transform2 {
  Rotation2 Z;
  TransformKind kind = TransformKind::Identity;
};

/// One pass over the four columns.  Throws IndefiniteMetric if s_pp or s_qq
/// is not positive.
PivotBlock2 gram2(std::span<const Complex> fp, std::span<const Complex> fq, std::span<const Complex> gp,
                  std::span<const Complex> gq, const Signature& j, Lanes lanes = {});

/// Scales the block so that s_pp = s_qq = 1.
PivotBlock2 prescale(const PivotBlock2& b);

/// Convergence test on a prescaled block of a problem of order n.
bool needs_transform(const PivotBlock2& b, std::size_t n, double eps = std::numeric_limits<double>::epsilon());

/// Z with Z^* S Z = I and Z^* H Z diagonal for the 2x2 blocks of b.
/// Throws IndefiniteMetric when the prescaled |s_pq| >= 1.
Transform2 compute_transform(const PivotBlock2& b);

/// Batched form of compute_transform.  Lanes without an exceptional case
/// are evaluated by a branch-free path and agree bitwise with the scalar
/// kernel; exceptional lanes are recomputed by the scalar kernel.
void compute_transforms(std::span<const PivotBlock2> blocks, std::span<Transform2> out);

/// True when max(NaN, 0) == 0 and max(1, 0) == 1 for the selection used by
/// the batched kernel.  Evaluated once; false routes every lane through
/// the scalar kernel.
bool lane_select_semantics_ok();

}  // namespace ghsvd
