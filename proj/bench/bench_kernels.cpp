// Circle kernel (FFT vs Horner) and replicate fan-out (parallel vs serial).

#include <complex>
#include <vector>

#include <benchmark/benchmark.h>

#include "rentire/growth.hpp"
#include "rentire/parallel.hpp"
#include "rentire/random.hpp"
#include "rentire/series.hpp"

namespace {

using namespace rentire;

std::vector<std::complex<double>> random_coeffs(std::size_t n) {
  std::vector<std::complex<double>> c(n);
  for (std::size_t i = 0; i < n; ++i)
    c[i] = {counter_uniform(3, i, 0) - 0.5, counter_uniform(3, i, 1) - 0.5};
  return c;
}

void BM_CircleFFT(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto c = random_coeffs(n);
  const std::size_t m = grid_size_for(n);
  for (auto _ : st) benchmark::DoNotOptimize(circle_values_fft(c, m));
  st.SetComplexityN(st.range(0));
}

void BM_CircleDirect(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto c = random_coeffs(n);
  const std::size_t m = grid_size_for(n);
  for (auto _ : st) benchmark::DoNotOptimize(circle_values_direct(c, m));
  st.SetComplexityN(st.range(0));
}

// One replicate: sup norm of a fresh Gaussian series at radius r.
double sup_replicate(std::size_t j, double r) {
  SeriesHandle h(CoefficientSource::random(DistSpec::complex_gaussian(), mix_seed(1, j)));
  return log_sup_norm(h, r);
}

void BM_ReplicateSerial(benchmark::State& st) {
  const auto reps = static_cast<std::size_t>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(replicate_map(
        reps, [](std::size_t j) { return sup_replicate(j, 100.0); }, ParallelOptions::serial()));
}

void BM_ReplicateParallel(benchmark::State& st) {
  const auto reps = static_cast<std::size_t>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(
        replicate_map(reps, [](std::size_t j) { return sup_replicate(j, 100.0); }));
}

}  // namespace

BENCHMARK(BM_CircleFFT)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oNLogN);
BENCHMARK(BM_CircleDirect)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_ReplicateSerial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicateParallel)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
