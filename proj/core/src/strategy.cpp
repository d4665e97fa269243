#include "ghsvd/strategy.hpp"

#include <algorithm>
#include <iostream>

#include "ghsvd/errors.hpp"

namespace ghsvd {
namespace {

IndexPair ordered(std::size_t a, std::size_t b) { return a < b ? IndexPair{a, b} : IndexPair{b, a}; }

std::vector<std::vector<IndexPair>> butterfly(const std::vector<std::size_t>& idx) {
  const std::size_t n = idx.size();
  if (n == 2) return {{ordered(idx[0], idx[1])}};
  const std::size_t h = n / 2;
  const std::vector<std::size_t> a(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(h));
  const std::vector<std::size_t> b(idx.begin() + static_cast<std::ptrdiff_t>(h), idx.end());
  auto steps = butterfly(a);
  const auto right = butterfly(b);
  for (std::size_t s = 0; s < steps.size(); ++s) {
    steps[s].insert(steps[s].end(), right[s].begin(), right[s].end());
  }
  for (std::size_t s = 0; s < h; ++s) {
    std::vector<IndexPair> step;
    for (std::size_t i = 0; i < h; ++i) step.push_back(ordered(a[i], b[(i + s) % h]));
    steps.push_back(std::move(step));
  }
  return steps;
}

}  // namespace

Strategy strategy_mm(std::size_t n) {
  require(n >= 2 && n % 2 == 0, "strategy_mm: order must be even and at least 2");
  Strategy s{n, StrategyClass::MM, {}};
  if (n == 2) {
    s.steps = {{{0, 1}}};
    return s;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<IndexPair> step;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (k + n - i) % n;
      if (i < j) step.emplace_back(i, j);
    }
    if (k % 2 == 0) step.push_back(ordered(k / 2, k / 2 + n / 2));
    std::sort(step.begin(), step.end());
    s.steps.push_back(std::move(step));
  }
  return s;
}

bool me_constructible(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

Strategy strategy_me(std::size_t n) {
  require(n >= 2 && n % 2 == 0, "strategy_me: order must be even and at least 2");
  if (!me_constructible(n)) {
    throw ContractViolation("strategy_me: order " + std::to_string(n) +
                            " is not a power of two; use the MM strategy");
  }
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Strategy s{n, StrategyClass::ME, butterfly(idx)};
  for (auto& step : s.steps) std::sort(step.begin(), step.end());
  return s;
}

Strategy make_strategy(StrategyClass cls, std::size_t n) {
  if (cls == StrategyClass::ME && !me_constructible(n)) {
    std::clog << "ghsvd: ME ordering unavailable for order " << n << ", using MM\n";
    return strategy_mm(n);
  }
  return cls == StrategyClass::ME ? strategy_me(n) : strategy_mm(n);
}

bool covers_all_pairs(const Strategy& s) {
  const std::size_t n = s.n;
  std::vector<char> seen(n * n, 0);
  for (const auto& step : s.steps) {
    for (const auto& [p, q] : step) {
      if (p >= q || q >= n) return false;
      seen[p * n + q] = 1;
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (!seen[p * n + q]) return false;
    }
  }
  return true;
}

bool steps_disjoint(const Strategy& s) {
  std::vector<std::size_t> mark(s.n, 0);
  std::size_t stamp = 0;
  for (const auto& step : s.steps) {
    ++stamp;
    for (const auto& [p, q] : step) {
      if (p >= s.n || q >= s.n || p == q) return false;
      if (mark[p] == stamp || mark[q] == stamp) return false;
      mark[p] = mark[q] = stamp;
    }
  }
  return true;
}

}  // namespace ghsvd
