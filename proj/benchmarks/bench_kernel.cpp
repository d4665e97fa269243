#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ghsvd/generator.hpp"
#include "ghsvd/hz_kernel.hpp"
#include "ghsvd/kernel.hpp"

using namespace ghsvd;

namespace {

std::vector<Complex> random_vector(std::size_t m, Rng& rng) {
  std::vector<Complex> v(m);
  for (auto& x : v) x = rng.complex_normal();
  return v;
}

Signature half_negative(std::size_t m) { return Signature::sorted(m / 2, m); }

void BM_Jdot(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const auto f = random_vector(m, rng), g = random_vector(m, rng);
  const Signature j = half_negative(m);
  for (auto _ : state) benchmark::DoNotOptimize(jdot(f, g, j));
  state.SetBytesProcessed(state.iterations() * 2 * m * sizeof(Complex));
}
BENCHMARK(BM_Jdot)->RangeMultiplier(4)->Range(64, 16384);

void BM_Jgram3(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const auto f = random_vector(m, rng), g = random_vector(m, rng);
  const Signature j = half_negative(m);
  for (auto _ : state) benchmark::DoNotOptimize(jgram3(f, g, j));
}
BENCHMARK(BM_Jgram3)->RangeMultiplier(4)->Range(64, 16384);

void BM_Vrotm(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  auto p = random_vector(m, rng), q = random_vector(m, rng);
  const Rotation2 z{Complex(0.8, 0.0), Complex(0.36, 0.48), Complex(-0.36, 0.48), Complex(0.8, 0.0)};
  for (auto _ : state) {
    vrotm(p, q, z);
    benchmark::ClobberMemory();
  }
  state.SetBytesProcessed(state.iterations() * 4 * m * sizeof(Complex));
}
BENCHMARK(BM_Vrotm)->RangeMultiplier(4)->Range(64, 16384);

std::vector<PivotBlock2> random_blocks(std::size_t count) {
  Rng rng(4);
  std::vector<PivotBlock2> blocks(count);
  for (auto& b : blocks) {
    b.s_pp = rng.uniform(0.5, 2.0);
    b.s_qq = rng.uniform(0.5, 2.0);
    b.s_pq = std::polar(rng.uniform(0.0, 0.9) * std::sqrt(b.s_pp * b.s_qq), rng.uniform(0.0, 6.283185307179586));
    b.h_pp = rng.normal();
    b.h_qq = rng.normal();
    b.h_pq = rng.complex_normal();
  }
  return blocks;
}

void BM_TransformScalar(benchmark::State& state) {
  const auto blocks = random_blocks(1024);
  for (auto _ : state)
    for (const auto& b : blocks) benchmark::DoNotOptimize(compute_transform(b));
  state.SetItemsProcessed(state.iterations() * blocks.size());
}
BENCHMARK(BM_TransformScalar);

void BM_TransformBatched(benchmark::State& state) {
  const auto blocks = random_blocks(1024);
  std::vector<Transform2> out(blocks.size());
  for (auto _ : state) {
    compute_transforms(blocks, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * blocks.size());
}
BENCHMARK(BM_TransformBatched);

}  // namespace

BENCHMARK_MAIN();
