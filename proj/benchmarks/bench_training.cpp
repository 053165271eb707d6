#include <benchmark/benchmark.h>

#include "qres/training.hpp"

namespace {

void BM_TrainEpoch(benchmark::State& state) {
  qres::DatasetSpec spec;
  spec.n_total = 1000;
  const auto data = qres::split_dataset(qres::generate_dataset(spec));
  const auto rows = qres::FeatureRows::column(data.train.x);
  const qres::FeatureRows none{1, {}};
  qres::TrainConfig cfg;
  cfg.epochs_per_stage = 1;
  const auto m = qres::initialize_module({static_cast<int>(state.range(0)), 2, 1,
                                          qres::EncodingMode::Full},
                                         0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qres::train_module(m, rows, data.train.y, none, {}, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(data.train.x.size()));
}
BENCHMARK(BM_TrainEpoch)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace
