#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace ghsvd {

enum class StrategyClass { MM, ME };

using IndexPair = std::pair<std::size_t, std::size_t>;

/// Parallel ordering of the pivot pairs of an even order n.  Indices are
/// zero-based and p < q in every pair.
struct Strategy {
  std::size_t n = 0;
  StrategyClass cls = StrategyClass::MM;
  std::vector<std::vector<IndexPair>> steps;
};

/// Modified modulus: n steps of n/2 pairs; step k pairs i with j where
/// i + j = k (mod n), and for even k also k/2 with k/2 + n/2.  n = 2 gives a
/// single step.
Strategy strategy_mm(std::size_t n);

/// Cyclic ordering with n - 1 steps of n/2 pairs, built recursively for n a
/// power of two.  Other orders throw ContractViolation.
Strategy strategy_me(std::size_t n);

bool me_constructible(std::size_t n);

/// `cls`, or MM when ME cannot be built for n.
Strategy make_strategy(StrategyClass cls, std::size_t n);

/// Every pair occurs, and no index repeats inside a step.
bool covers_all_pairs(const Strategy& s);
bool steps_disjoint(const Strategy& s);

}  // namespace ghsvd
