#include <benchmark/benchmark.h>

#include <cstdint>

#include "orbitgrowth/arith.hpp"
#include "orbitgrowth/context.hpp"
#include "orbitgrowth/mersenne.hpp"
#include "orbitgrowth/mertens.hpp"
#include "orbitgrowth/sets.hpp"

namespace og = orbitgrowth;

static void BM_SievePrimes(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    const auto table = og::arith::sieve_primes(limit);
    benchmark::DoNotOptimize(table.prime_count());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SievePrimes)->RangeMultiplier(10)->Range(10'000, 10'000'000)->Unit(benchmark::kMillisecond);

static void BM_OrderTable(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    const og::arith::OrderTable orders(limit);
    benchmark::DoNotOptimize(orders);
  }
}
BENCHMARK(BM_OrderTable)->RangeMultiplier(8)->Range(1 << 12, 1 << 20)->Unit(benchmark::kMillisecond);

static void BM_DominantSum(benchmark::State& state) {
  const og::sets::OrderSet M(og::sets::OrderSetSpec::multiples_of(og::sets::PrimeClass::list({3})));
  const auto grid = og::mertens::geometric_grid(10, static_cast<std::uint64_t>(state.range(0)), 4);
  for (auto _ : state) {
    const auto series = og::mertens::dominant_sum(grid, M);
    benchmark::DoNotOptimize(series);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DominantSum)->RangeMultiplier(10)->Range(10'000, 10'000'000)->Unit(benchmark::kMillisecond);

static void BM_FactorMersenne(benchmark::State& state) {
  const auto m = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    og::mersenne::FactorCache cache;
    const auto f = og::mersenne::factor_mersenne(m, cache);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_FactorMersenne)->DenseRange(40, 100, 20)->Unit(benchmark::kMillisecond);

static void BM_MertensExact(benchmark::State& state) {
  const auto S = og::sets::PrimeSetSpec::induced(og::sets::OrderSetSpec::complement_multiples_of(3));
  const auto n_max = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    og::Context ctx;
    const auto series = og::mertens::mertens_exact(n_max, S, ctx);
    benchmark::DoNotOptimize(series);
  }
}
BENCHMARK(BM_MertensExact)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
