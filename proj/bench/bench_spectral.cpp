#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "fracsim/spectral.hpp"

using namespace fracsim;

namespace {

std::vector<double> bump(const Grid& g) {
  std::vector<double> v(g.n);
  for (std::size_t i = 0; i < g.n; ++i) v[i] = std::exp(-g.x(i) * g.x(i)) + 0.1;
  return v;
}

Grid grid_of(const benchmark::State& state) { return Grid{50.0, static_cast<std::size_t>(state.range(0))}; }

void BM_PowerKernel(benchmark::State& state) {
  const Grid g = grid_of(state);
  const auto in = bump(g);
  std::vector<double> out(g.n);
  for (auto _ : state) {
    spectral::kernels::power(in, 1.37, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * g.n);
}

void BM_PowerSerial(benchmark::State& state) {
  const Grid g = grid_of(state);
  const auto in = bump(g);
  std::vector<double> out(g.n);
  for (auto _ : state) {
    spectral::serial::power(in, 1.37, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * g.n);
}

void BM_MultiplyKernel(benchmark::State& state) {
  const Grid g = grid_of(state);
  const auto table = spectral::symbol_table({spectral::SymbolKind::FractionalLaplacian, 0.3}, g);
  std::vector<std::complex<double>> spec(table.size(), {1.0, 0.5});
  for (auto _ : state) {
    spectral::kernels::multiply_table(table.data(), spec.data(), spec.size());
    benchmark::DoNotOptimize(spec.data());
  }
  state.SetItemsProcessed(state.iterations() * spec.size());
}

void BM_MultiplySerial(benchmark::State& state) {
  const Grid g = grid_of(state);
  const auto table = spectral::symbol_table({spectral::SymbolKind::FractionalLaplacian, 0.3}, g);
  std::vector<std::complex<double>> spec(table.size(), {1.0, 0.5});
  for (auto _ : state) {
    spectral::serial::multiply_table(table.data(), spec.data(), spec.size());
    benchmark::DoNotOptimize(spec.data());
  }
  state.SetItemsProcessed(state.iterations() * spec.size());
}

void BM_ApplyFFT(benchmark::State& state) {
  const Grid g = grid_of(state);
  const auto in = bump(g);
  std::vector<double> out(g.n);
  const spectral::Multiplier m{spectral::SymbolKind::FractionalLaplacian, 0.5};
  for (auto _ : state) {
    spectral::apply(m, g, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}

void BM_ApplyDFT(benchmark::State& state) {
  const Grid g = grid_of(state);
  const auto in = bump(g);
  std::vector<double> out(g.n);
  const spectral::Multiplier m{spectral::SymbolKind::FractionalLaplacian, 0.5};
  for (auto _ : state) {
    spectral::reference::apply(m, g, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_PowerKernel)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);
BENCHMARK(BM_PowerSerial)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);
BENCHMARK(BM_MultiplyKernel)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);
BENCHMARK(BM_MultiplySerial)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);
BENCHMARK(BM_ApplyFFT)->RangeMultiplier(2)->Range(1 << 8, 1 << 12)->Complexity(benchmark::oNLogN);
BENCHMARK(BM_ApplyDFT)->RangeMultiplier(2)->Range(1 << 8, 1 << 12)->Complexity(benchmark::oNSquared);

int main(int argc, char** argv) {
  spectral::configure_threads();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
