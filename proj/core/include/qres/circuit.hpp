#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qres/simulator.hpp"

namespace qres {

enum class EncodingMode {
  Full,   // RY(pi x), RZ(pi x^3), RX(pi sqrt|1 - x^2|) on every qubit
  RyOnly  // RY(pi x) only
};

std::string to_string(EncodingMode mode);
EncodingMode parse_encoding_mode(const std::string& text);

struct CircuitConfig {
  int n_qubits = 6;
  int n_layers = 2;
  int input_dim = 1;
  EncodingMode encoding = EncodingMode::Full;

  /// Throws ConfigError on qubits outside [1, kMaxQubits], layers < 1 or
  /// input_dim outside {1, 2}.
  void validate() const;

  friend bool operator==(const CircuitConfig&, const CircuitConfig&) = default;
};

/// Trainable-parameter layout of the variational layers.
///
/// Each layer holds, in order:
///   - for q = 0..n-1: RY, RZ, RX angles of qubit q       (3n slots)
///   - for every ordered pair (c, t), c != t, lexicographic in (c, t):
///     CRY, CRZ, CRX angles with control c and target t  (3n(n-1) slots)
/// Layers are concatenated, so slot indices run 0..total_count-1.
struct ParameterLayout {
  std::size_t single_qubit_per_layer = 0;
  std::size_t entangling_per_layer = 0;
  std::size_t per_layer = 0;
  std::size_t total_count = 0;

  static ParameterLayout of(const CircuitConfig& config);
};

std::vector<GateOp> build_encoding(std::span<const double> features, const CircuitConfig& config);

std::vector<GateOp> build_variational_layers(std::span<const double> effective_params,
                                             const CircuitConfig& config);

/// Encoding block followed by the variational layers.
std::vector<GateOp> build_full_circuit(std::span<const double> features,
                                       std::span<const double> effective_params,
                                       const CircuitConfig& config);

}  // namespace qres
