#include "qres/circuit.hpp"

#include <cmath>
#include <numbers>

#include "qres/errors.hpp"

namespace qres {

std::string to_string(EncodingMode mode) {
  return mode == EncodingMode::Full ? "full" : "ry_only";
}

EncodingMode parse_encoding_mode(const std::string& text) {
  if (text == "full") return EncodingMode::Full;
  if (text == "ry_only") return EncodingMode::RyOnly;
  throw ConfigError("unknown encoding mode '" + text + "' (expected full or ry_only)");
}

void CircuitConfig::validate() const {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw ConfigError("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                      std::to_string(n_qubits));
  }
  if (n_layers < 1) {
    throw ConfigError("n_layers must be >= 1, got " + std::to_string(n_layers));
  }
  if (input_dim != 1 && input_dim != 2) {
    throw ConfigError("input_dim must be 1 or 2, got " + std::to_string(input_dim));
  }
}

ParameterLayout ParameterLayout::of(const CircuitConfig& config) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.n_qubits);
  ParameterLayout layout;
  layout.single_qubit_per_layer = 3 * n;
  layout.entangling_per_layer = 3 * n * (n - 1);
  layout.per_layer = layout.single_qubit_per_layer + layout.entangling_per_layer;
  layout.total_count = layout.per_layer * static_cast<std::size_t>(config.n_layers);
  return layout;
}

std::vector<GateOp> build_encoding(std::span<const double> features, const CircuitConfig& config) {
  config.validate();
  if (features.size() != static_cast<std::size_t>(config.input_dim)) {
    throw StructuralError("expected " + std::to_string(config.input_dim) + " features, got " +
                          std::to_string(features.size()));
  }
  for (double f : features) {
    if (!std::isfinite(f)) throw InputError("non-finite feature");
  }

  constexpr double pi = std::numbers::pi;
  std::vector<GateOp> gates;
  gates.reserve(static_cast<std::size_t>(config.n_qubits) * 3);
  for (int q = 0; q < config.n_qubits; ++q) {
    const double x = features[static_cast<std::size_t>(q % config.input_dim)];
    gates.push_back({GateKind::RY, q, std::nullopt, pi * x, std::nullopt});
    if (config.encoding == EncodingMode::Full) {
      gates.push_back({GateKind::RZ, q, std::nullopt, pi * x * x * x, std::nullopt});
      gates.push_back(
          {GateKind::RX, q, std::nullopt, pi * std::sqrt(std::abs(1.0 - x * x)), std::nullopt});
    }
  }
  return gates;
}

std::vector<GateOp> build_variational_layers(std::span<const double> effective_params,
                                             const CircuitConfig& config) {
  const ParameterLayout layout = ParameterLayout::of(config);
  if (effective_params.size() != layout.total_count) {
    throw StructuralError("expected " + std::to_string(layout.total_count) +
                          " circuit parameters, got " + std::to_string(effective_params.size()));
  }

  constexpr GateKind kSingle[] = {GateKind::RY, GateKind::RZ, GateKind::RX};
  constexpr GateKind kControlled[] = {GateKind::CRY, GateKind::CRZ, GateKind::CRX};

  std::vector<GateOp> gates;
  gates.reserve(layout.total_count);
  std::size_t slot = 0;
  auto emit = [&](GateKind kind, int target, std::optional<int> control) {
    gates.push_back({kind, target, control, effective_params[slot], slot});
    ++slot;
  };
  const int n = config.n_qubits;
  for (int layer = 0; layer < config.n_layers; ++layer) {
    for (int q = 0; q < n; ++q) {
      for (GateKind k : kSingle) emit(k, q, std::nullopt);
    }
    for (int c = 0; c < n; ++c) {
      for (int t = 0; t < n; ++t) {
        if (c == t) continue;
        for (GateKind k : kControlled) emit(k, t, c);
      }
    }
  }
  return gates;
}

std::vector<GateOp> build_full_circuit(std::span<const double> features,
                                       std::span<const double> effective_params,
                                       const CircuitConfig& config) {
  std::vector<GateOp> gates = build_encoding(features, config);
  std::vector<GateOp> layers = build_variational_layers(effective_params, config);
  gates.insert(gates.end(), layers.begin(), layers.end());
  return gates;
}

}  // namespace qres
