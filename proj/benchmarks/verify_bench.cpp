#include <benchmark/benchmark.h>

#include "cnfuse/bounds.hpp"
#include "cnfuse/verify.hpp"

namespace {

using namespace cnfuse;

SymMatrix p1_example() {
  Matrix a(2, 2);
  a << 9, 3, 3, 4;
  return SymMatrix(a);
}

SymMatrix p2_example() {
  Matrix a(2, 2);
  a << 4, -3, -3, 9;
  return SymMatrix(a);
}

void bench_verify(benchmark::State& state, bool parallel) {
  const SymMatrix p1 = p1_example();
  const SymMatrix p2 = p2_example();
  const SymMatrix m = dual_upper_bound(p1, p2, 1.0, b_matrix(p1, p2, 0.5));
  const JointSampler sampler =
      family_sampler(CorrelationFamily::kCommonNoiseRank1, p1, p2);
  const long n = state.range(0);
  for (auto _ : state) {
    const VerifyReport r = parallel ? verify_upper(m, sampler, n, 42)
                                    : verify_upper_serial(m, sampler, n, 42);
    benchmark::DoNotOptimize(r.min_margin);
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_VerifySerial(benchmark::State& state) { bench_verify(state, false); }
void BM_VerifyParallel(benchmark::State& state) { bench_verify(state, true); }

BENCHMARK(BM_VerifySerial)->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK(BM_VerifyParallel)->Arg(1000)->Arg(10000)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
