#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "qres/circuit.hpp"

namespace qres {

/// One trainable stage: circuit angles (unconstrained, squashed by
/// pi*tanh before use) plus an unconstrained linear readout over the
/// per-qubit <Z> values.
struct QuantumModule {
  CircuitConfig config;
  std::vector<double> raw_params;
  std::vector<double> readout_weights;
  double readout_bias = 0.0;

  /// Number of trainable scalars: raw params, readout weights, bias.
  std::size_t trainable_count() const { return raw_params.size() + readout_weights.size() + 1; }

  /// Flat view in the order raw_params, readout_weights, readout_bias.
  std::vector<double> trainable_values() const;
  void assign_trainable(std::span<const double> values);

  /// Throws StructuralError/InputError when shapes disagree with the
  /// config or a parameter is non-finite.
  void validate() const;

  friend bool operator==(const QuantumModule&, const QuantumModule&) = default;
};

/// Zero-valued module of the right shape.
QuantumModule make_module(const CircuitConfig& config);

/// Raw circuit params ~ N(0, 1), readout weights ~ U[-0.1, 0.1], bias 0.
QuantumModule initialize_module(const CircuitConfig& config, std::uint64_t seed);

/// Elementwise pi * tanh(raw).
std::vector<double> effective_params(std::span<const double> raw_params);

/// bias + sum_q w_q <Z_q>.
double forward(const QuantumModule& module, std::span<const double> features);

struct ForwardBackward {
  double prediction = 0.0;
  double loss = 0.0;  // (prediction - target)^2
  /// Gradient of loss, laid out like QuantumModule::trainable_values().
  std::vector<double> gradient;
};

/// Squared error of one sample and its gradient with respect to every
/// trainable scalar. The circuit part uses a single adjoint pass with the
/// observable sum_q 2(y_hat - y) w_q Z_q.
ForwardBackward forward_backward(const QuantumModule& module, std::span<const double> features,
                                 double target);

/// Text checkpoint. Layout, one token pair or value per line:
///
///   format qres-module-v1
///   n_qubits <int>
///   n_layers <int>
///   input_dim <int>
///   encoding full|ry_only
///   raw_params <count>
///   <value>            (count lines, %.17g)
///   readout_weights <count>
///   <value>            (count lines)
///   readout_bias <value>
void write_checkpoint(std::ostream& out, const QuantumModule& module);
QuantumModule read_checkpoint(std::istream& in);

}  // namespace qres
