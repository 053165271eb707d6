#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "qres/datagen.hpp"
#include "qres/model.hpp"

namespace qres {

struct TrainConfig {
  std::size_t batch_size = 64;
  double learning_rate = 0.005;
  int epochs_per_stage = 25;
  int n_stages = 4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
  /// Worker threads for per-sample passes; 0 = hardware concurrency.
  /// Results do not depend on this value.
  unsigned threads = 1;

  void validate() const;
};

struct AdamState {
  std::uint64_t step_count = 0;
  std::vector<double> first_moment;
  std::vector<double> second_moment;

  explicit AdamState(std::size_t n = 0) : first_moment(n, 0.0), second_moment(n, 0.0) {}
};

/// One bias-corrected Adam update of params in place.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               const TrainConfig& config);

/// Mean squared error. Throws InputError on length mismatch or empty input.
double mse(std::span<const double> predictions, std::span<const double> targets);

/// Row-major feature matrix with `dim` columns.
struct FeatureRows {
  std::size_t dim = 1;
  std::vector<double> values;

  std::size_t rows() const { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }

  static FeatureRows column(std::span<const double> x);
};

/// forward() of every row.
std::vector<double> predict_all(const QuantumModule& module, const FeatureRows& inputs,
                                unsigned threads = 1);

struct EpochRecord {
  int stage = 1;
  int epoch = 1;
  double train_mse = 0.0;
  double val_mse = 0.0;
};

struct StageSummary {
  int stage = 1;
  double test_mse = 0.0;
};

struct StageLog {
  std::vector<EpochRecord> epochs;
  std::vector<StageSummary> summaries;
  /// Training-set MSE of each stage's freshly initialized module on its
  /// targets, before the first optimizer step.
  std::vector<double> initial_train_mse;
  std::uint64_t optimizer_steps = 0;
};

struct TrainResult {
  QuantumModule module;
  std::vector<EpochRecord> epochs;
  double initial_train_mse = 0.0;
  std::uint64_t optimizer_steps = 0;
};

/// Mini-batch Adam on the squared error. Every epoch reshuffles the training
/// indices with an engine seeded from config.seed, averages per-sample
/// gradients over each batch (the last batch may be short) and logs full-set
/// train/val MSE. The val set may be empty, in which case val_mse is NaN.
TrainResult train_module(QuantumModule module, const FeatureRows& inputs,
                         std::span<const double> targets, const FeatureRows& val_inputs,
                         std::span<const double> val_targets, const TrainConfig& config,
                         int stage = 1);

struct ResidualEnsemble {
  std::vector<QuantumModule> modules;
};

/// Features for stage previous.size()+1: the x column alone for stage 1,
/// otherwise [x, o] where o is the chained output of the last module.
FeatureRows build_stage_features(std::span<const QuantumModule> previous, std::span<const double> x,
                                 unsigned threads = 1);

/// Cumulative predictions F_1..F_S, one vector per stage, each module
/// evaluated once per x.
std::vector<std::vector<double>> ensemble_stage_predictions(const ResidualEnsemble& ensemble,
                                                            std::span<const double> x,
                                                            unsigned threads = 1);

/// F_S(x).
std::vector<double> ensemble_predict(const ResidualEnsemble& ensemble, std::span<const double> x,
                                     unsigned threads = 1);

/// Seeds of stage s (1-based). The baseline reuses stage 1's seeds.
std::uint64_t stage_init_seed(std::uint64_t seed, int stage);
std::uint64_t stage_shuffle_seed(std::uint64_t seed, int stage);

struct ResidualRun {
  ResidualEnsemble ensemble;
  StageLog log;
};

/// Stage-wise residual training. Stage s trains a fresh module on
/// y - F_{s-1} with build_stage_features inputs; earlier modules stay frozen.
ResidualRun train_residual(const DatasetSplits& data, const TrainConfig& config,
                           const CircuitConfig& circuit);

struct BaselineRun {
  QuantumModule module;
  StageLog log;
};

/// Single module trained for n_stages * epochs_per_stage epochs.
BaselineRun train_baseline(const DatasetSplits& data, const TrainConfig& config,
                           const CircuitConfig& circuit);

/// "stage,epoch,train_mse,val_mse"
void write_stage_log_csv(std::ostream& out, const StageLog& log);
/// "stage,test_mse"
void write_stage_summary_csv(std::ostream& out, const StageLog& log);

}  // namespace qres
