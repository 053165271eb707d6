#include <benchmark/benchmark.h>

#include "qres/model.hpp"

namespace {

qres::QuantumModule module_for(benchmark::State& state) {
  return qres::initialize_module(
      {static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 1,
       qres::EncodingMode::Full},
      1);
}

void BM_Forward(benchmark::State& state) {
  const auto m = module_for(state);
  const double x = 0.37;
  for (auto _ : state) benchmark::DoNotOptimize(qres::forward(m, std::span(&x, 1)));
}
BENCHMARK(BM_Forward)->ArgsProduct({{2, 4, 6, 8, 10}, {2}})->Unit(benchmark::kMicrosecond);

void BM_ForwardBackward(benchmark::State& state) {
  const auto m = module_for(state);
  const double x = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qres::forward_backward(m, std::span(&x, 1), 0.1));
  }
  state.counters["params"] = static_cast<double>(m.trainable_count());
}
BENCHMARK(BM_ForwardBackward)
    ->ArgsProduct({{2, 4, 6, 8, 10}, {1, 2, 4}})
    ->Unit(benchmark::kMicrosecond);

void BM_ApplyGate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  qres::StateVector s(n);
  const qres::GateOp g{static_cast<qres::GateKind>(state.range(1)), n - 1,
                       qres::is_controlled(static_cast<qres::GateKind>(state.range(1)))
                           ? std::optional<int>(0)
                           : std::nullopt,
                       0.3, std::nullopt};
  for (auto _ : state) {
    qres::apply_gate(s, g);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_ApplyGate)->ArgsProduct({{6, 10, 12}, {0, 1, 2, 3, 4, 5}});

}  // namespace
