#include <benchmark/benchmark.h>

#include <cmath>

#include "synthdim/eigensolver.hpp"
#include "synthdim/greens.hpp"
#include "synthdim/hamiltonian.hpp"
#include "synthdim/polylog.hpp"

namespace {

using namespace synthdim;

void BM_PairCoupling(benchmark::State& state) {
  double d = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pair_coupling(d));
    d = d < 40.0 ? d + 0.1 : 0.1;
  }
}
BENCHMARK(BM_PairCoupling);

void BM_Polylog(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  double theta = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(polylog_unit_circle(s, theta));
    theta = theta < 6.2 ? theta + 0.013 : 0.01;
  }
}
BENCHMARK(BM_Polylog)->DenseRange(1, 3);

void BM_BlochSumClosed(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bloch_sum(1.1, 0.1));
}
BENCHMARK(BM_BlochSumClosed);

void BM_BlochSumTruncated(benchmark::State& state) {
  LatticeSumOptions o;
  o.method = SumMethod::Truncated;
  o.l_max = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(bloch_sum(1.1, 0.1, o));
}
BENCHMARK(BM_BlochSumTruncated)->RangeMultiplier(10)->Range(1000, 1'000'000)->Unit(benchmark::kMicrosecond);

ChainConfig chain(int n) {
  ChainConfig c;
  c.n_atoms = n;
  c.spacing = 0.1;
  c.zeeman_amp = 10.0;
  c.flux = std::sqrt(5.0) / 10.0;
  c.phase = 0.3;
  return c;
}

void BM_BuildFinite(benchmark::State& state) {
  const ChainConfig c = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_finite(c));
}
BENCHMARK(BM_BuildFinite)->Arg(101)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_Eigendecompose(benchmark::State& state) {
  const CMatrix m = build_finite(chain(static_cast<int>(state.range(0)))).matrix;
  const EigenOptions opts{.tol_eig = 1e-9, .vectors = state.range(1) != 0};
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(m, opts));
}
BENCHMARK(BM_Eigendecompose)->Args({50, 0})->Args({50, 1})->Args({101, 0})->Args({101, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
