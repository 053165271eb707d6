#include <benchmark/benchmark.h>

#include <cmath>

#include "qres/spectral.hpp"

namespace {

void BM_AmplitudeSpectrum(benchmark::State& state) {
  const qres::GridSpec grid{0.0, 2.0, static_cast<std::size_t>(state.range(0))};
  const auto x = qres::dense_grid(grid);
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = std::sin(40.0 * x[i]) * std::exp(-x[i]);
  for (auto _ : state) benchmark::DoNotOptimize(qres::amplitude_spectrum(v, grid));
}
BENCHMARK(BM_AmplitudeSpectrum)->Arg(256)->Arg(2000)->Arg(4096);

}  // namespace
