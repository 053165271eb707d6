#include "qres/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "qres/errors.hpp"
#include "qres/format.hpp"

namespace qres {

void BarrenConfig::validate() const {
  if (qubit_values.empty() || layer_values.empty()) {
    throw ConfigError("barren sweep needs non-empty qubit and layer lists");
  }
  for (int q : qubit_values) {
    if (q < 1 || q > kMaxQubits) throw ConfigError("barren qubit count out of range");
  }
  for (int l : layer_values) {
    if (l < 1) throw ConfigError("barren layer count must be >= 1");
  }
  if (n_inits < 2) throw ConfigError("n_inits must be >= 2");
  if (probe_batch < 1) throw ConfigError("probe_batch must be >= 1");
  if (!(x_max > x_min)) throw ConfigError("probe domain needs x_min < x_max");
}

ProbeSet make_probe_set(const BarrenConfig& config) {
  std::mt19937_64 rng(derive_seed(config.seed, 0, 0));
  std::uniform_real_distribution<double> ux(config.x_min, config.x_max);
  ProbeSet probe;
  for (std::size_t i = 0; i < config.probe_batch; ++i) {
    const double x = ux(rng);
    probe.x.push_back(x);
    probe.y.push_back(target_function(config.components, x));
  }
  return probe;
}

QuantumModule sample_probe_init(const CircuitConfig& config, std::uint64_t seed) {
  QuantumModule m = make_module(config);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (double& p : m.raw_params) {
    double u = uniform(rng);
    while (u <= -1.0) u = uniform(rng);
    p = std::atanh(u);
  }
  std::fill(m.readout_weights.begin(), m.readout_weights.end(), 1.0);
  m.readout_bias = 0.0;
  return m;
}

double probe_gradient(const QuantumModule& module, const ProbeSet& probe) {
  if (probe.x.empty() || probe.x.size() != probe.y.size()) {
    throw InputError("probe set is empty or inconsistent");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < probe.x.size(); ++i) {
    const double x = probe.x[i];
    acc += forward_backward(module, std::span<const double>(&x, 1), probe.y[i]).gradient.at(0);
  }
  return acc / static_cast<double>(probe.x.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) throw InputError("variance needs at least two values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size() - 1);
}

double gradient_variance_of(std::span<const QuantumModule> modules, const ProbeSet& probe,
                            unsigned threads) {
  std::vector<double> grads(modules.size());
  parallel_for(modules.size(), threads,
               [&](std::size_t i) { grads[i] = probe_gradient(modules[i], probe); });
  return sample_variance(grads);
}

namespace {

VarianceRecord cell_variance(int n_qubits, int n_layers, const BarrenConfig& config,
                             const ProbeSet& probe) {
  CircuitConfig circuit{n_qubits, n_layers, 1, config.encoding};
  circuit.validate();
  const std::uint64_t cell = (static_cast<std::uint64_t>(n_qubits) << 32) |
                             static_cast<std::uint64_t>(n_layers);
  std::vector<double> grads(config.n_inits);
  parallel_for(config.n_inits, config.threads, [&](std::size_t i) {
    grads[i] = probe_gradient(sample_probe_init(circuit, derive_seed(config.seed, cell, i + 1)),
                              probe);
  });
  return {n_qubits, n_layers, sample_variance(grads), config.n_inits};
}

}  // namespace

VarianceRecord gradient_variance(int n_qubits, int n_layers, const BarrenConfig& config) {
  config.validate();
  return cell_variance(n_qubits, n_layers, config, make_probe_set(config));
}

BarrenSweep run_barren_sweep(const BarrenConfig& config) {
  config.validate();
  const ProbeSet probe = make_probe_set(config);
  BarrenSweep sweep;
  for (int q : config.qubit_values) {
    for (int l : config.layer_values) sweep.records.push_back(cell_variance(q, l, config, probe));
  }

  const int n0 = *std::min_element(config.qubit_values.begin(), config.qubit_values.end());
  const int l_max = *std::max_element(config.layer_values.begin(), config.layer_values.end());
  double anchor = 0.0;
  for (const auto& r : sweep.records) {
    if (r.n_qubits == n0 && r.n_layers == l_max) anchor = r.grad_variance;
  }
  const double c_poly = anchor * n0;
  const double c_exp = anchor * std::exp(0.5 * n0);
  for (int q : config.qubit_values) {
    sweep.references.push_back({q, c_poly / q, c_exp * std::exp(-0.5 * q)});
  }
  return sweep;
}

void write_barren_csv(std::ostream& out, std::span<const VarianceRecord> records) {
  out << "n_qubits,n_layers,grad_variance,n_inits\n";
  for (const auto& r : records) {
    out << r.n_qubits << ',' << r.n_layers << ',' << format_double(r.grad_variance) << ','
        << r.n_inits << '\n';
  }
}

void write_reference_csv(std::ostream& out, std::span<const ReferencePoint> refs) {
  out << "n_qubits,poly_ref,exp_ref\n";
  for (const auto& r : refs) {
    out << r.n_qubits << ',' << format_double(r.poly_ref) << ',' << format_double(r.exp_ref)
        << '\n';
  }
}

}  // namespace qres
