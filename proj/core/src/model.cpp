#include "qres/model.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "qres/errors.hpp"
#include "qres/format.hpp"

namespace qres {

std::vector<double> QuantumModule::trainable_values() const {
  std::vector<double> values;
  values.reserve(trainable_count());
  values.insert(values.end(), raw_params.begin(), raw_params.end());
  values.insert(values.end(), readout_weights.begin(), readout_weights.end());
  values.push_back(readout_bias);
  return values;
}

void QuantumModule::assign_trainable(std::span<const double> values) {
  if (values.size() != trainable_count()) {
    throw StructuralError("expected " + std::to_string(trainable_count()) +
                          " trainable values, got " + std::to_string(values.size()));
  }
  auto it = values.begin();
  for (double& p : raw_params) p = *it++;
  for (double& w : readout_weights) w = *it++;
  readout_bias = *it;
}

void QuantumModule::validate() const {
  const ParameterLayout layout = ParameterLayout::of(config);
  if (raw_params.size() != layout.total_count) {
    throw StructuralError("module has " + std::to_string(raw_params.size()) +
                          " raw params, layout needs " + std::to_string(layout.total_count));
  }
  if (readout_weights.size() != static_cast<std::size_t>(config.n_qubits)) {
    throw StructuralError("readout width does not match qubit count");
  }
  for (double v : trainable_values()) {
    if (!std::isfinite(v)) throw InputError("non-finite module parameter");
  }
}

QuantumModule make_module(const CircuitConfig& config) {
  const ParameterLayout layout = ParameterLayout::of(config);
  QuantumModule m;
  m.config = config;
  m.raw_params.assign(layout.total_count, 0.0);
  m.readout_weights.assign(static_cast<std::size_t>(config.n_qubits), 0.0);
  return m;
}

QuantumModule initialize_module(const CircuitConfig& config, std::uint64_t seed) {
  QuantumModule m = make_module(config);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-0.1, 0.1);
  for (double& p : m.raw_params) p = normal(rng);
  for (double& w : m.readout_weights) w = uniform(rng);
  m.readout_bias = 0.0;
  return m;
}

std::vector<double> effective_params(std::span<const double> raw_params) {
  std::vector<double> out(raw_params.size());
  for (std::size_t i = 0; i < raw_params.size(); ++i) {
    out[i] = std::numbers::pi * std::tanh(raw_params[i]);
  }
  return out;
}

namespace {

struct Evaluated {
  std::vector<GateOp> gates;
  StateVector state;
  std::vector<double> z;
  double prediction;
};

Evaluated evaluate(const QuantumModule& module, std::span<const double> features) {
  const std::vector<double> angles = effective_params(module.raw_params);
  std::vector<GateOp> gates = build_full_circuit(features, angles, module.config);
  StateVector state = simulate(gates, module.config.n_qubits);
  std::vector<double> z = expectation_z_all(state);
  double y = module.readout_bias;
  for (std::size_t q = 0; q < z.size(); ++q) y += module.readout_weights[q] * z[q];
  return {std::move(gates), std::move(state), std::move(z), y};
}

}  // namespace

double forward(const QuantumModule& module, std::span<const double> features) {
  if (module.readout_weights.size() != static_cast<std::size_t>(module.config.n_qubits)) {
    throw StructuralError("readout width does not match qubit count");
  }
  return evaluate(module, features).prediction;
}

ForwardBackward forward_backward(const QuantumModule& module, std::span<const double> features,
                                 double target) {
  if (module.readout_weights.size() != static_cast<std::size_t>(module.config.n_qubits)) {
    throw StructuralError("readout width does not match qubit count");
  }
  const Evaluated ev = evaluate(module, features);
  const double residual = ev.prediction - target;
  const double scale = 2.0 * residual;

  ForwardBackward out;
  out.prediction = ev.prediction;
  out.loss = residual * residual;
  out.gradient.assign(module.trainable_count(), 0.0);

  const std::size_t n_raw = module.raw_params.size();
  const std::size_t n_q = module.readout_weights.size();
  std::span<double> grad_raw(out.gradient.data(), n_raw);

  if (scale != 0.0) {
    ZSumObservable observable{std::vector<double>(n_q)};
    for (std::size_t q = 0; q < n_q; ++q) observable.weights[q] = scale * module.readout_weights[q];
    adjoint_backward(ev.gates, ev.state, observable, grad_raw);
    for (std::size_t i = 0; i < n_raw; ++i) {
      const double t = std::tanh(module.raw_params[i]);
      grad_raw[i] *= std::numbers::pi * (1.0 - t * t);
    }
  }
  for (std::size_t q = 0; q < n_q; ++q) out.gradient[n_raw + q] = scale * ev.z[q];
  out.gradient[n_raw + n_q] = scale;
  return out;
}

void write_checkpoint(std::ostream& out, const QuantumModule& module) {
  module.validate();
  out << "format qres-module-v1\n";
  out << "n_qubits " << module.config.n_qubits << '\n';
  out << "n_layers " << module.config.n_layers << '\n';
  out << "input_dim " << module.config.input_dim << '\n';
  out << "encoding " << to_string(module.config.encoding) << '\n';
  out << "raw_params " << module.raw_params.size() << '\n';
  for (double v : module.raw_params) out << format_double(v) << '\n';
  out << "readout_weights " << module.readout_weights.size() << '\n';
  for (double v : module.readout_weights) out << format_double(v) << '\n';
  out << "readout_bias " << format_double(module.readout_bias) << '\n';
}

namespace {

std::string expect_key(std::istream& in, const std::string& key) {
  std::string found;
  std::string value;
  if (!(in >> found >> value) || found != key) {
    throw InputError("checkpoint: expected key '" + key + "'" +
                     (found.empty() ? std::string{} : ", found '" + found + "'"));
  }
  return value;
}

int expect_int(std::istream& in, const std::string& key) {
  const std::string text = expect_key(in, key);
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw InputError("");
    return v;
  } catch (const std::exception&) {
    throw InputError("checkpoint: bad integer for '" + key + "': " + text);
  }
}

std::vector<double> expect_array(std::istream& in, const std::string& key) {
  const int count = expect_int(in, key);
  if (count < 0) throw InputError("checkpoint: negative count for '" + key + "'");
  std::vector<double> values(static_cast<std::size_t>(count));
  for (double& v : values) {
    std::string token;
    if (!(in >> token)) throw InputError("checkpoint: truncated '" + key + "' block");
    v = parse_double(token);
  }
  return values;
}

}  // namespace

QuantumModule read_checkpoint(std::istream& in) {
  if (expect_key(in, "format") != "qres-module-v1") {
    throw InputError("checkpoint: unsupported format");
  }
  QuantumModule m;
  m.config.n_qubits = expect_int(in, "n_qubits");
  m.config.n_layers = expect_int(in, "n_layers");
  m.config.input_dim = expect_int(in, "input_dim");
  m.config.encoding = parse_encoding_mode(expect_key(in, "encoding"));
  m.raw_params = expect_array(in, "raw_params");
  m.readout_weights = expect_array(in, "readout_weights");
  m.readout_bias = parse_double(expect_key(in, "readout_bias"));
  m.validate();
  return m;
}

}  // namespace qres
