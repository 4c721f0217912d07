// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include <numbers>

#include "dbk/dpp.hpp"
#include "dbk/kernels.hpp"

namespace {

std::vector<double> bessel_points(int n) {
  std::vector<double> p;
  for (int i = 1; i <= n; ++i) p.push_back(0.25 * i);
  return p;
}

void BM_KernelGrid(benchmark::State& state) {
  const auto pts = bessel_points(static_cast<int>(state.range(0)));
  const auto spec = dbk::KernelSpec::bessel(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(dbk::kernel_grid(spec, pts));
}

void BM_KernelGridSerial(benchmark::State& state) {
  const auto pts = bessel_points(static_cast<int>(state.range(0)));
  const auto spec = dbk::KernelSpec::bessel(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(dbk::kernel_grid_serial(spec, pts));
}

const dbk::dpp::DppKernel& sine_window() {
  static const auto k =
      dbk::dpp::truncate(dbk::KernelSpec::discrete_sine(std::numbers::pi / 3), dbk::dpp::Window::integers(20));
  return k;
}

void BM_DppTrials(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dbk::dpp::sample_trials(sine_window(), state.range(0), 7));
}

void BM_DppTrialsSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dbk::dpp::sample_trials_serial(sine_window(), state.range(0), 7));
}

void BM_Normality(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dbk::normality_witness(static_cast<int>(state.range(0))));
}

void BM_NormalitySerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dbk::normality_witness_serial(static_cast<int>(state.range(0))));
}

}  // namespace

BENCHMARK(BM_KernelGrid)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelGridSerial)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DppTrials)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DppTrialsSerial)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Normality)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NormalitySerial)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
