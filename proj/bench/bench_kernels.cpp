#include <benchmark/benchmark.h>

#include "acimlab/gora_density.hpp"
#include "acimlab/ulam.hpp"

namespace {

using namespace acimlab;

const WParams kParams{2.0, 2.0, 1.0, 1.0, 1.0, 0.01};

void BM_BuildUlamSerial(benchmark::State& state) {
  const auto map = build_w_map(kParams);
  const auto bins = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::build_ulam(map, bins));
}

void BM_BuildUlamParallel(benchmark::State& state) {
  const auto map = build_w_map(kParams);
  const auto bins = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_ulam(map, bins));
}

void BM_StationarySerial(benchmark::State& state) {
  const auto m = build_ulam(build_w_map(kParams), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::stationary_vector(m));
}

void BM_StationaryParallel(benchmark::State& state) {
  const auto m = build_ulam(build_w_map(kParams), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(stationary_vector(m));
}

void BM_TransferOperator(benchmark::State& state) {
  const auto map = build_w_map(kParams);
  const auto f = density_series(kParams);
  for (auto _ : state) benchmark::DoNotOptimize(transfer_operator_apply(map, f));
}

}  // namespace

BENCHMARK(BM_BuildUlamSerial)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);
BENCHMARK(BM_BuildUlamParallel)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);
BENCHMARK(BM_StationarySerial)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);
BENCHMARK(BM_StationaryParallel)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);
BENCHMARK(BM_TransferOperator);

BENCHMARK_MAIN();
