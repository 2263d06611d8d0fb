// Serial reference kernels against their OpenMP versions.

#include "stabilis/amenability.hpp"
#include "stabilis/harness.hpp"
#include "stabilis/rng.hpp"

#include <benchmark/benchmark.h>

using namespace stabilis;

namespace {

Execution execution(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial"
                                     : "omp x" + std::to_string(parallel_threads()));
}

void BM_strassen_samples(benchmark::State& state) {
  StrassenConfig c;
  c.n_eps = 10;
  c.samples = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(strassen_samples(c, execution(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(c.n_eps * c.samples));
  label(state);
}
BENCHMARK(BM_strassen_samples)->ArgsProduct({{0, 1}, {20, 100}})->Unit(benchmark::kMillisecond);

void BM_sine_experiment(benchmark::State& state) {
  SineConfig c;
  c.k_max = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(sine_experiment(c, execution(state)));
  label(state);
}
BENCHMARK(BM_sine_experiment)->ArgsProduct({{0, 1}, {50, 100}})->Unit(benchmark::kMillisecond);

void BM_forward_stability(benchmark::State& state) {
  Rng rng(1);
  std::vector<ExactVector> inputs;
  for (int i = 0; i < state.range(1); ++i) {
    ExactVector x;
    for (int j = 0; j < 16; ++j) x.emplace_back(to_rational(Real(rng.normal())));
    inputs.push_back(std::move(x));
  }
  const auto alg = make_algorithm("inner-product", 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_stability_check(alg, inputs, {24, 53, 113}, 128, execution(state)));
  }
  label(state);
}
BENCHMARK(BM_forward_stability)->ArgsProduct({{0, 1}, {25, 100}})->Unit(benchmark::kMillisecond);

void BM_amenability_probe(benchmark::State& state) {
  const auto f = CatalogFunction::inner_product(16);
  Rng rng(2);
  std::vector<Real> c(32);
  for (auto& v : c) v = Real(rng.uniform() + 0.1);
  const RelPoint x(c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(amenability_probe(f, x, 8, static_cast<std::size_t>(state.range(1)), 3,
                                               execution(state)));
  }
  label(state);
}
BENCHMARK(BM_amenability_probe)->ArgsProduct({{0, 1}, {200, 1000}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
