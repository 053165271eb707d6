#include "qres/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "qres/errors.hpp"
#include "qres/format.hpp"

namespace qres {

void TrainConfig::validate() const {
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (epochs_per_stage < 1) throw ConfigError("epochs must be >= 1");
  if (n_stages < 1) throw ConfigError("stages must be >= 1");
  if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0)) throw ConfigError("adam_beta1 must be in (0, 1)");
  if (!(adam_beta2 > 0.0 && adam_beta2 < 1.0)) throw ConfigError("adam_beta2 must be in (0, 1)");
  if (!(adam_epsilon > 0.0)) throw ConfigError("adam_epsilon must be positive");
}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               const TrainConfig& config) {
  if (params.size() != grads.size() || state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size()) {
    throw StructuralError("adam_step: parameter, gradient and moment sizes differ");
  }
  ++state.step_count;
  const double b1 = config.adam_beta1;
  const double b2 = config.adam_beta2;
  const double t = static_cast<double>(state.step_count);
  const double correction1 = 1.0 - std::pow(b1, t);
  const double correction2 = 1.0 - std::pow(b2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g * g;
    const double m_hat = m / correction1;
    const double v_hat = v / correction2;
    params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_epsilon);
  }
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size()) {
    throw InputError("mse: " + std::to_string(predictions.size()) + " predictions vs " +
                     std::to_string(targets.size()) + " targets");
  }
  if (predictions.empty()) throw InputError("mse: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - targets[i];
    acc += d * d;
  }
  return acc / static_cast<double>(predictions.size());
}

FeatureRows FeatureRows::column(std::span<const double> x) {
  return {1, std::vector<double>(x.begin(), x.end())};
}

std::vector<double> predict_all(const QuantumModule& module, const FeatureRows& inputs,
                                unsigned threads) {
  if (inputs.dim != static_cast<std::size_t>(module.config.input_dim)) {
    throw StructuralError("feature width " + std::to_string(inputs.dim) +
                          " does not match module input_dim " +
                          std::to_string(module.config.input_dim));
  }
  std::vector<double> out(inputs.rows());
  parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = forward(module, inputs.row(i)); });
  return out;
}

namespace {

double mse_or_nan(const QuantumModule& module, const FeatureRows& inputs,
                  std::span<const double> targets, unsigned threads) {
  if (targets.empty()) return std::numeric_limits<double>::quiet_NaN();
  return mse(predict_all(module, inputs, threads), targets);
}

}  // namespace

TrainResult train_module(QuantumModule module, const FeatureRows& inputs,
                         std::span<const double> targets, const FeatureRows& val_inputs,
                         std::span<const double> val_targets, const TrainConfig& config,
                         int stage) {
  config.validate();
  module.validate();
  const std::size_t n = inputs.rows();
  if (n == 0) throw InputError("train_module: empty training set");
  if (targets.size() != n || val_targets.size() != val_inputs.rows()) {
    throw InputError("train_module: feature and target counts differ");
  }
  const auto dim = static_cast<std::size_t>(module.config.input_dim);
  if (inputs.dim != dim || (val_inputs.rows() > 0 && val_inputs.dim != dim)) {
    throw StructuralError("train_module: feature width does not match module input_dim");
  }

  TrainResult result;
  result.initial_train_mse = mse_or_nan(module, inputs, targets, config.threads);

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  const std::size_t n_params = module.trainable_count();
  AdamState adam(n_params);
  std::vector<double> params = module.trainable_values();
  std::vector<std::vector<double>> sample_grads(std::min(config.batch_size, n));
  std::vector<double> batch_grad(n_params);

  for (int epoch = 1; epoch <= config.epochs_per_stage; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t count = std::min(config.batch_size, n - start);
      parallel_for(count, config.threads, [&](std::size_t j) {
        const std::size_t i = order[start + j];
        sample_grads[j] = forward_backward(module, inputs.row(i), targets[i]).gradient;
      });
      std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
      for (std::size_t j = 0; j < count; ++j) {
        for (std::size_t k = 0; k < n_params; ++k) batch_grad[k] += sample_grads[j][k];
      }
      const double inv = 1.0 / static_cast<double>(count);
      for (double& g : batch_grad) g *= inv;
      adam_step(adam, params, batch_grad, config);
      module.assign_trainable(params);
      ++result.optimizer_steps;
    }
    EpochRecord rec;
    rec.stage = stage;
    rec.epoch = epoch;
    rec.train_mse = mse_or_nan(module, inputs, targets, config.threads);
    rec.val_mse = mse_or_nan(module, val_inputs, val_targets, config.threads);
    result.epochs.push_back(rec);
  }
  result.module = std::move(module);
  return result;
}

namespace {

FeatureRows with_previous_output(std::span<const double> x, std::span<const double> previous) {
  FeatureRows rows{2, std::vector<double>(2 * x.size())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    rows.values[2 * i] = x[i];
    rows.values[2 * i + 1] = previous[i];
  }
  return rows;
}

// Raw outputs o_1..o_S of the chained modules.
std::vector<std::vector<double>> chained_outputs(std::span<const QuantumModule> modules,
                                                 std::span<const double> x, unsigned threads) {
  std::vector<std::vector<double>> outputs;
  outputs.reserve(modules.size());
  for (std::size_t t = 0; t < modules.size(); ++t) {
    const FeatureRows rows =
        t == 0 ? FeatureRows::column(x) : with_previous_output(x, outputs.back());
    outputs.push_back(predict_all(modules[t], rows, threads));
  }
  return outputs;
}

}  // namespace

FeatureRows build_stage_features(std::span<const QuantumModule> previous, std::span<const double> x,
                                 unsigned threads) {
  if (previous.empty()) return FeatureRows::column(x);
  const auto outputs = chained_outputs(previous, x, threads);
  return with_previous_output(x, outputs.back());
}

std::vector<std::vector<double>> ensemble_stage_predictions(const ResidualEnsemble& ensemble,
                                                            std::span<const double> x,
                                                            unsigned threads) {
  if (ensemble.modules.empty()) throw StructuralError("ensemble has no modules");
  auto cumulative = chained_outputs(ensemble.modules, x, threads);
  for (std::size_t s = 1; s < cumulative.size(); ++s) {
    for (std::size_t i = 0; i < x.size(); ++i) cumulative[s][i] += cumulative[s - 1][i];
  }
  return cumulative;
}

std::vector<double> ensemble_predict(const ResidualEnsemble& ensemble, std::span<const double> x,
                                     unsigned threads) {
  return ensemble_stage_predictions(ensemble, x, threads).back();
}

namespace {
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kShuffleStream = 1;
}  // namespace

std::uint64_t stage_init_seed(std::uint64_t seed, int stage) {
  return derive_seed(seed, static_cast<std::uint64_t>(stage), kInitStream);
}

std::uint64_t stage_shuffle_seed(std::uint64_t seed, int stage) {
  return derive_seed(seed, static_cast<std::uint64_t>(stage), kShuffleStream);
}

namespace {

// Per-split state carried between stages.
struct SplitState {
  const SplitColumns* data;
  std::vector<double> cumulative;   // F_{s-1}
  std::vector<double> last_output;  // o_{s-1}

  explicit SplitState(const SplitColumns& d)
      : data(&d), cumulative(d.x.size(), 0.0), last_output() {}

  FeatureRows features(int stage) const {
    return stage == 1 ? FeatureRows::column(data->x) : with_previous_output(data->x, last_output);
  }

  std::vector<double> residuals() const {
    std::vector<double> r(data->y.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = data->y[i] - cumulative[i];
    return r;
  }

  void advance(const QuantumModule& module, const FeatureRows& rows, unsigned threads) {
    last_output = predict_all(module, rows, threads);
    for (std::size_t i = 0; i < cumulative.size(); ++i) cumulative[i] += last_output[i];
  }
};

void check_splits(const DatasetSplits& data) {
  if (data.train.x.empty()) throw InputError("dataset has no training samples");
  if (data.test.x.empty()) throw InputError("dataset has no test samples");
  for (const SplitColumns* s : {&data.train, &data.val, &data.test}) {
    if (s->x.size() != s->y.size()) throw InputError("split x/y columns differ in length");
  }
}

}  // namespace

ResidualRun train_residual(const DatasetSplits& data, const TrainConfig& config,
                           const CircuitConfig& circuit) {
  config.validate();
  check_splits(data);

  ResidualRun run;
  SplitState train(data.train);
  SplitState val(data.val);
  SplitState test(data.test);

  for (int s = 1; s <= config.n_stages; ++s) {
    CircuitConfig stage_circuit = circuit;
    stage_circuit.input_dim = s == 1 ? 1 : 2;

    const FeatureRows train_rows = train.features(s);
    const FeatureRows val_rows = val.features(s);
    const FeatureRows test_rows = test.features(s);
    const std::vector<double> train_targets = train.residuals();
    const std::vector<double> val_targets = val.residuals();

    TrainConfig stage_config = config;
    stage_config.seed = stage_shuffle_seed(config.seed, s);
    TrainResult trained =
        train_module(initialize_module(stage_circuit, stage_init_seed(config.seed, s)), train_rows,
                     train_targets, val_rows, val_targets, stage_config, s);

    train.advance(trained.module, train_rows, config.threads);
    val.advance(trained.module, val_rows, config.threads);
    test.advance(trained.module, test_rows, config.threads);

    run.log.epochs.insert(run.log.epochs.end(), trained.epochs.begin(), trained.epochs.end());
    run.log.initial_train_mse.push_back(trained.initial_train_mse);
    run.log.optimizer_steps += trained.optimizer_steps;
    run.log.summaries.push_back({s, mse(test.cumulative, data.test.y)});
    run.ensemble.modules.push_back(std::move(trained.module));
  }
  return run;
}

BaselineRun train_baseline(const DatasetSplits& data, const TrainConfig& config,
                           const CircuitConfig& circuit) {
  config.validate();
  check_splits(data);

  CircuitConfig base_circuit = circuit;
  base_circuit.input_dim = 1;
  TrainConfig base_config = config;
  base_config.epochs_per_stage = config.n_stages * config.epochs_per_stage;
  base_config.seed = stage_shuffle_seed(config.seed, 1);

  const FeatureRows train_rows = FeatureRows::column(data.train.x);
  const FeatureRows val_rows = FeatureRows::column(data.val.x);
  TrainResult trained =
      train_module(initialize_module(base_circuit, stage_init_seed(config.seed, 1)), train_rows,
                   data.train.y, val_rows, data.val.y, base_config, 1);

  BaselineRun run;
  run.log.epochs = trained.epochs;
  run.log.initial_train_mse.push_back(trained.initial_train_mse);
  run.log.optimizer_steps = trained.optimizer_steps;
  const auto test_pred =
      predict_all(trained.module, FeatureRows::column(data.test.x), config.threads);
  run.log.summaries.push_back({1, mse(test_pred, data.test.y)});
  run.module = std::move(trained.module);
  return run;
}

void write_stage_log_csv(std::ostream& out, const StageLog& log) {
  out << "stage,epoch,train_mse,val_mse\n";
  for (const auto& e : log.epochs) {
    out << e.stage << ',' << e.epoch << ',' << format_double(e.train_mse) << ','
        << format_double(e.val_mse) << '\n';
  }
}

void write_stage_summary_csv(std::ostream& out, const StageLog& log) {
  out << "stage,test_mse\n";
  for (const auto& s : log.summaries) out << s.stage << ',' << format_double(s.test_mse) << '\n';
}

}  // namespace qres
