#include <benchmark/benchmark.h>

#include "ghsvd/assembly.hpp"
#include "ghsvd/generator.hpp"
#include "ghsvd/hz.hpp"
#include "ghsvd/shorten.hpp"

using namespace ghsvd;

namespace {

FactoredPencil pencil(std::size_t n) {
  GeneratorSpec spec;
  spec.n = n;
  spec.neg = n / 4;
  spec.lo = 0.1;
  spec.hi = 10.0;
  return *generate(spec, 7).pencil;
}

void BM_Hebpj(benchmark::State& state) {
  Rng rng(5);
  const ComplexMatrix t = random_hermitian(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(hebpj(t));
}
BENCHMARK(BM_Hebpj)->Arg(8)->Arg(98)->Arg(242)->Unit(benchmark::kMillisecond);

void BM_Jqr(benchmark::State& state) {
  const FactoredPencil p = pencil(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(jqr(p.F, p.J));
}
BENCHMARK(BM_Jqr)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

// Args: n, variant, workers.
void BM_Hz(benchmark::State& state) {
  const FactoredPencil p = pencil(static_cast<std::size_t>(state.range(0)));
  const JqrResult q = jqr(p.F, p.J);
  const ComplexMatrix g = tsqr(prepermute(p.G, q.col_perm));
  HZConfig cfg;
  cfg.variant = static_cast<Variant>(state.range(1));
  cfg.workers = static_cast<std::size_t>(state.range(2));
  cfg.want_uv = false;
  std::size_t sweeps = 0;
  for (auto _ : state) sweeps = hz_solve(q.F, g, q.J, cfg).sweeps;
  state.counters["sweeps"] = static_cast<double>(sweeps);
}
BENCHMARK(BM_Hz)
    ->ArgsProduct({{64, 128, 256}, {0, 1, 2}, {1, 4}})
    ->ArgNames({"n", "variant", "workers"})
    ->Unit(benchmark::kMillisecond);

}  // namespace
