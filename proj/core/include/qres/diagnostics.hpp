#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "qres/datagen.hpp"
#include "qres/model.hpp"

namespace qres {

struct BarrenConfig {
  std::vector<int> qubit_values{2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<int> layer_values{1, 2, 3, 4};
  std::size_t n_inits = 100;
  std::size_t probe_batch = 32;
  std::uint64_t seed = 0;
  EncodingMode encoding = EncodingMode::Full;
  std::vector<FrequencyComponent> components = default_components();
  double x_min = 0.0;
  double x_max = 2.0;
  unsigned threads = 1;

  void validate() const;
};

struct VarianceRecord {
  int n_qubits = 0;
  int n_layers = 0;
  double grad_variance = 0.0;
  std::size_t n_inits = 0;
};

struct ReferencePoint {
  int n_qubits = 0;
  double poly_ref = 0.0;  // c1 / n
  double exp_ref = 0.0;   // c2 * exp(-n / 2)
};

struct BarrenSweep {
  std::vector<VarianceRecord> records;
  std::vector<ReferencePoint> references;
};

/// Fixed probe data shared by every initialization of a sweep.
struct ProbeSet {
  std::vector<double> x;
  std::vector<double> y;
};

/// probe_batch points x ~ U[x_min, x_max] with noise-free targets.
ProbeSet make_probe_set(const BarrenConfig& config);

/// Circuit angles uniform on (-pi, pi) (raw = atanh(u), u ~ U(-1, 1)),
/// readout weights 1, bias 0.
QuantumModule sample_probe_init(const CircuitConfig& config, std::uint64_t seed);

/// d(batch-mean squared error)/d(raw slot 0).
double probe_gradient(const QuantumModule& module, const ProbeSet& probe);

/// Unbiased sample variance; needs at least two values.
double sample_variance(std::span<const double> values);

/// Variance of probe_gradient over the given modules.
double gradient_variance_of(std::span<const QuantumModule> modules, const ProbeSet& probe,
                            unsigned threads = 1);

/// Variance over config.n_inits seeded probe initializations of one cell.
VarianceRecord gradient_variance(int n_qubits, int n_layers, const BarrenConfig& config);

/// All (qubit, layer) cells, qubits outer, plus 1/n and exp(-n/2)
/// reference curves anchored at the smallest qubit count of the largest
/// layer count.
BarrenSweep run_barren_sweep(const BarrenConfig& config);

/// "n_qubits,n_layers,grad_variance,n_inits"
void write_barren_csv(std::ostream& out, std::span<const VarianceRecord> records);
/// "n_qubits,poly_ref,exp_ref"
void write_reference_csv(std::ostream& out, std::span<const ReferencePoint> refs);

}  // namespace qres
