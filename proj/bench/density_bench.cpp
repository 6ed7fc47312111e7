// Serial vs OpenMP density kernel. Run with --benchmark_filter=... as usual.
#include <benchmark/benchmark.h>

#include "bbiso/order_analysis.hpp"

using namespace bbiso;

static void BM_DensitySerial(benchmark::State& state) {
  const u64 limit = static_cast<u64>(state.range(0));
  const auto set = state.range(1) ? OrderSet::Dhat : OrderSet::D;
  for (auto _ : state) benchmark::DoNotOptimize(density_scan_serial(set, limit).count);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

static void BM_DensityParallel(benchmark::State& state) {
  const u64 limit = static_cast<u64>(state.range(0));
  const auto set = state.range(1) ? OrderSet::Dhat : OrderSet::D;
  for (auto _ : state) benchmark::DoNotOptimize(density_scan(set, limit).count);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

static void BM_DensityReference(benchmark::State& state) {
  const u64 limit = static_cast<u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(density_scan_reference(OrderSet::D, limit).count);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_DensitySerial)->ArgsProduct({{100000, 1000000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DensityParallel)->ArgsProduct({{100000, 1000000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DensityReference)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
