#include <benchmark/benchmark.h>

#include "loewner/checkers.hpp"
#include "loewner/funcalc.hpp"
#include "loewner/random.hpp"

using namespace loewner;

static void BM_EigHermitian(benchmark::State& state) {
  Rng rng(42);
  const HermitianMatrix m = random_hermitian(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(m));
}
BENCHMARK(BM_EigHermitian)->RangeMultiplier(2)->Range(4, 64);

static void BM_ApplyMultivariate(benchmark::State& state) {
  Rng rng(7);
  const Eigen::Index n = state.range(0);
  const OperandTuple x({random_pd(n, rng), random_pd(n, rng)});
  const ScalarFunction f = parse("r1^2*r2^2/((1+r1)*(1+r2))", 2);
  for (auto _ : state) benchmark::DoNotOptimize(apply_multivariate(f, x));
}
BENCHMARK(BM_ApplyMultivariate)->DenseRange(2, 8, 2);

static void BM_MonotoneInstance(benchmark::State& state) {
  Rng rng(3);
  const int l = static_cast<int>(state.range(0));
  const HermitianMatrix a = random_pd(3, rng);
  const HermitianMatrix b = random_pd(3, rng);
  const std::vector<Decomposition> d{sample_decomposition(a, l, rng), sample_decomposition(b, l, rng)};
  const OperandTuple x({a, b});
  const ScalarFunction g = builtin("neg_inv_product", 2);
  for (auto _ : state) benchmark::DoNotOptimize(check_monotone_instance(g, x, d, {l, 0}));
}
BENCHMARK(BM_MonotoneInstance)->DenseRange(2, 4);

static void BM_ConvexSearch(benchmark::State& state) {
  // Passing search, so every trial runs.
  const ScalarFunction f = builtin("square1", 1);
  SearchOptions opts;
  opts.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_convex_search(f, {6}, 64, 1, opts));
}
BENCHMARK(BM_ConvexSearch)->Arg(1)->Arg(4)->UseRealTime();

BENCHMARK_MAIN();
