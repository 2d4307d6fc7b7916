#include <benchmark/benchmark.h>

#include "hoqmc/net_construction.hpp"
#include "hoqmc/sobolev_kernel.hpp"

using namespace hoqmc;

namespace {

PointSet interlaced_sobol(std::size_t s, std::size_t m) {
  return generate_points(interlace(sobol_matrices(2 * s, m), 2));
}

void BM_WceParallel(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto s = static_cast<std::size_t>(state.range(1));
  const auto pts = interlaced_sobol(s, m).values();
  const KernelParams params{2, Weights::product(std::vector<double>(s, 1.0))};
  for (auto _ : state) benchmark::DoNotOptimize(worst_case_error_sq(params, pts));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (2 * m)));
}

void BM_WceSerial(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto s = static_cast<std::size_t>(state.range(1));
  const auto pts = interlaced_sobol(s, m).values();
  const KernelParams params{2, Weights::product(std::vector<double>(s, 1.0))};
  for (auto _ : state) benchmark::DoNotOptimize(serial::worst_case_error_sq(params, pts));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (2 * m)));
}

void BM_PointsParallel(benchmark::State& state) {
  const auto g = interlace(sobol_matrices(8, static_cast<std::size_t>(state.range(0))), 2);
  for (auto _ : state) benchmark::DoNotOptimize(generate_points(g));
}

void BM_PointsSerial(benchmark::State& state) {
  const auto g = interlace(sobol_matrices(8, static_cast<std::size_t>(state.range(0))), 2);
  for (auto _ : state) benchmark::DoNotOptimize(serial::generate_points(g));
}

}  // namespace

BENCHMARK(BM_WceParallel)->ArgsProduct({{8, 10, 12}, {1, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WceSerial)->ArgsProduct({{8, 10, 12}, {1, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PointsParallel)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PointsSerial)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
