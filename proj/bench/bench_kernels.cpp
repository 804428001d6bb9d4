// Serial reference loops against the OpenMP kernels the library calls.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "hormander/kernels.hpp"

using namespace hormander;

namespace {

Lattice lattice_for(int n) { return {2, n, 2 * n, 2 * std::numbers::pi, 2 * std::numbers::pi}; }

const PhiFunction& log_phi() {
  static const PhiFunction phi = PhiFunction::log_power({1.0, -0.5});
  return phi;
}

template <auto Fill>
void BM_fill_weights(benchmark::State& state) {
  const auto lat = lattice_for(static_cast<int>(state.range(0)));
  const kernels::WeightSpec spec{2.5, 0.5, &log_phi()};
  std::vector<double> out(lat.size());
  for (auto _ : state) {
    Fill(lat, spec, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(lat.size()));
}

template <auto Energy>
void BM_weighted_energy(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  std::vector<Complex> c(n);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = Complex(nd(rng), nd(rng));
    w[i] = 1.0 + std::abs(nd(rng));
  }
  for (auto _ : state) benchmark::DoNotOptimize(Energy(c, w));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}

template <auto Sum>
void BM_monomial_weight_sum(benchmark::State& state) {
  const auto lat = lattice_for(static_cast<int>(state.range(0)));
  const kernels::WeightSpec spec{4.0, 0.5, &log_phi()};
  const kernels::Monomial mono{{1, 0}, 0};
  for (auto _ : state) benchmark::DoNotOptimize(Sum(lat, spec, mono));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(lat.size()));
}

}  // namespace

BENCHMARK(BM_fill_weights<kernels::serial::fill_weights>)->Name("fill_weights/serial")->Arg(32)->Arg(128);
BENCHMARK(BM_fill_weights<kernels::omp::fill_weights>)->Name("fill_weights/omp")->Arg(32)->Arg(128);
BENCHMARK(BM_weighted_energy<kernels::serial::weighted_energy>)->Name("weighted_energy/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_weighted_energy<kernels::omp::weighted_energy>)->Name("weighted_energy/omp")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_monomial_weight_sum<kernels::serial::monomial_weight_sum>)->Name("monomial_weight_sum/serial")->Arg(32)->Arg(128);
BENCHMARK(BM_monomial_weight_sum<kernels::omp::monomial_weight_sum>)->Name("monomial_weight_sum/omp")->Arg(32)->Arg(128);

BENCHMARK_MAIN();
