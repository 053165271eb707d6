#include "cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "cli/manifest.hpp"
#include "qres/errors.hpp"
#include "qres/format.hpp"

namespace qres::cli {

namespace fs = std::filesystem;

namespace {

// Owns the run directory and the list of files destined for the manifest.
class RunWriter {
 public:
  RunWriter(const RunConfig& config, std::string subcommand)
      : dir_(config.run_dir()) {
    manifest_.run_id = config.run_id;
    manifest_.subcommand = std::move(subcommand);
    manifest_.seed = config.seed;
    manifest_.started_at = utc_timestamp();
    manifest_.config = snapshot(config);
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir_ / name).string());
    body(out);
    out.flush();
    if (!out) throw Error("write failed for " + (dir_ / name).string());
    files_.push_back(name);
  }

  void add_failure(std::string what) { manifest_.failures.push_back(std::move(what)); }
  bool has_failures() const { return !manifest_.failures.empty(); }

  void finish() { write_manifest(dir_, manifest_, files_); }

 private:
  fs::path dir_;
  RunManifest manifest_;
  std::vector<std::string> files_;
};

std::vector<LabeledSample> load_or_generate(const RunConfig& config) {
  if (config.data_file.empty()) return generate_dataset(config.dataset);
  std::ifstream in(config.data_file);
  if (!in) throw Error("cannot open data_file " + config.data_file);
  return read_dataset_csv(in);
}

std::vector<double> target_frequencies(const RunConfig& config) {
  std::vector<double> out;
  for (const auto& c : config.dataset.components) out.push_back(c.omega);
  return out;
}

// Grid predictions, spectra and frequency bars for per-stage cumulative
// predictions on the analysis grid.
void write_spectral_outputs(RunWriter& w, const RunConfig& config,
                            const std::vector<std::vector<double>>& grid_predictions) {
  const GridSpec grid = config.grid();
  const auto x = dense_grid(grid);
  std::vector<double> y_true(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y_true[i] = target_function(config.dataset.components, x[i]);
  }
  const auto freqs = target_frequencies(config);
  const auto truth = amplitude_spectrum(y_true, grid);
  const auto stages = stage_spectra(grid_predictions, y_true, grid, freqs);

  w.write("grid_predictions.csv", [&](std::ostream& out) {
    out << "x,y_true";
    for (std::size_t s = 0; s < grid_predictions.size(); ++s) out << ",pred_s" << s + 1;
    out << '\n';
    for (std::size_t i = 0; i < x.size(); ++i) {
      out << format_double(x[i]) << ',' << format_double(y_true[i]);
      for (const auto& p : grid_predictions) out << ',' << format_double(p[i]);
      out << '\n';
    }
  });
  w.write("spectrum.csv", [&](std::ostream& out) { write_spectrum_csv(out, truth, stages); });
  w.write("freq_bars.csv",
          [&](std::ostream& out) { write_frequency_bars_csv(out, truth, freqs, stages); });
}

void write_dataset(RunWriter& w, const std::vector<LabeledSample>& samples) {
  w.write("dataset.csv", [&](std::ostream& out) { write_dataset_csv(out, samples); });
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"gen-data", "train", "baseline", "sweep-qubits",
                                                 "barren"};
  return names;
}

int run_gen_data(const RunConfig& config) {
  RunWriter w(config, "gen-data");
  write_dataset(w, generate_dataset(config.dataset));
  w.finish();
  return kExitSuccess;
}

int run_train(const RunConfig& config) {
  RunWriter w(config, "train");
  const auto samples = load_or_generate(config);
  write_dataset(w, samples);
  const DatasetSplits data = split_dataset(samples);

  const ResidualRun run = train_residual(data, config.train, config.circuit);

  w.write("stage_log.csv", [&](std::ostream& out) { write_stage_log_csv(out, run.log); });
  w.write("stage_summary.csv", [&](std::ostream& out) { write_stage_summary_csv(out, run.log); });
  for (std::size_t s = 0; s < run.ensemble.modules.size(); ++s) {
    w.write("module_s" + std::to_string(s + 1) + ".ckpt",
            [&](std::ostream& out) { write_checkpoint(out, run.ensemble.modules[s]); });
  }
  const auto grid_x = dense_grid(config.grid());
  write_spectral_outputs(w, config,
                         ensemble_stage_predictions(run.ensemble, grid_x, config.threads));
  w.finish();
  return kExitSuccess;
}

int run_baseline(const RunConfig& config) {
  RunWriter w(config, "baseline");
  const auto samples = load_or_generate(config);
  write_dataset(w, samples);
  const DatasetSplits data = split_dataset(samples);

  const BaselineRun run = train_baseline(data, config.train, config.circuit);

  w.write("stage_log.csv", [&](std::ostream& out) { write_stage_log_csv(out, run.log); });
  w.write("stage_summary.csv", [&](std::ostream& out) { write_stage_summary_csv(out, run.log); });
  w.write("module_baseline.ckpt", [&](std::ostream& out) { write_checkpoint(out, run.module); });
  const auto grid_x = dense_grid(config.grid());
  write_spectral_outputs(
      w, config, {predict_all(run.module, FeatureRows::column(grid_x), config.threads)});
  w.finish();
  return kExitSuccess;
}

int run_sweep_qubits(const RunConfig& config) {
  RunWriter w(config, "sweep-qubits");
  const auto samples = load_or_generate(config);
  const DatasetSplits data = split_dataset(samples);

  struct Row {
    int n_qubits;
    std::uint64_t seed;
    int stage;
    double test_mse;
    double baseline_mse;
    double rel_improvement;
  };
  std::vector<Row> rows;
  for (int q : config.sweep_qubits) {
    for (std::uint64_t seed : config.sweep_seeds) {
      std::clog << "sweep-qubits: n_qubits=" << q << " seed=" << seed << std::endl;
      try {
        CircuitConfig circuit = config.circuit;
        circuit.n_qubits = q;
        TrainConfig train = config.train;
        train.seed = seed;
        const ResidualRun residual = train_residual(data, train, circuit);
        const BaselineRun baseline = train_baseline(data, train, circuit);
        const double stage1 = residual.log.summaries.front().test_mse;
        const double base = baseline.log.summaries.front().test_mse;
        for (const auto& s : residual.log.summaries) {
          rows.push_back({q, seed, s.stage, s.test_mse, base, (stage1 - s.test_mse) / stage1});
        }
      } catch (const std::exception& e) {
        w.add_failure("n_qubits=" + std::to_string(q) + " seed=" + std::to_string(seed) + ": " +
                      e.what());
        std::clog << "sweep-qubits: cell failed: " << e.what() << std::endl;
      }
    }
  }

  w.write("sweep.csv", [&](std::ostream& out) {
    out << "n_qubits,seed,stage,test_mse,baseline_mse,rel_improvement\n";
    for (const auto& r : rows) {
      out << r.n_qubits << ',' << r.seed << ',' << r.stage << ',' << format_double(r.test_mse)
          << ',' << format_double(r.baseline_mse) << ',' << format_double(r.rel_improvement)
          << '\n';
    }
  });
  w.finish();
  return w.has_failures() ? kExitPartialSweep : kExitSuccess;
}

int run_barren(const RunConfig& config) {
  RunWriter w(config, "barren");
  const BarrenSweep sweep = run_barren_sweep(config.barren);
  w.write("barren.csv", [&](std::ostream& out) { write_barren_csv(out, sweep.records); });
  w.write("barren_reference.csv",
          [&](std::ostream& out) { write_reference_csv(out, sweep.references); });
  w.finish();
  return kExitSuccess;
}

int run_subcommand(const std::string& name, const KeyValues& values, std::ostream& err) {
  using Handler = int (*)(const RunConfig&);
  Handler handler = nullptr;
  if (name == "gen-data") handler = run_gen_data;
  if (name == "train") handler = run_train;
  if (name == "baseline") handler = run_baseline;
  if (name == "sweep-qubits") handler = run_sweep_qubits;
  if (name == "barren") handler = run_barren;
  if (!handler) {
    err << "error: unknown subcommand '" << name << "'\n";
    return kExitValidation;
  }

  RunConfig config;
  try {
    config = make_run_config(values);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  try {
    return handler(config);
  } catch (const std::exception& e) {
    err << "error: " << name << ": " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace qres::cli
