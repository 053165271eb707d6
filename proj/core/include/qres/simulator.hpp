#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qres {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 12;

enum class GateKind { RX, RY, RZ, CRX, CRY, CRZ };

/// True for CRX/CRY/CRZ.
constexpr bool is_controlled(GateKind kind) {
  return kind == GateKind::CRX || kind == GateKind::CRY || kind == GateKind::CRZ;
}

/// A single (possibly controlled) rotation exp(-i*angle*P/2).
/// Encoding gates carry no trainable slot.
struct GateOp {
  GateKind kind = GateKind::RY;
  int target = 0;
  std::optional<int> control;
  double angle = 0.0;
  std::optional<std::size_t> trainable_slot;
};

/// Dense n-qubit pure state. Qubit q is bit q of the basis index
/// (little-endian), so basis index 1 is |q0=1, q1=0, ...>.
class StateVector {
 public:
  /// |0...0> on n_qubits qubits; throws ConfigError outside [1, kMaxQubits].
  explicit StateVector(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return amplitudes_.size(); }

  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::span<Complex> amplitudes() { return amplitudes_; }

  double norm_squared() const;

 private:
  int n_qubits_;
  std::vector<Complex> amplitudes_;
};

/// Sum_q weights[q] * Z_q.
struct ZSumObservable {
  std::vector<double> weights;
};

StateVector init_zero_state(int n_qubits);

/// Applies gate in place. Throws StructuralError on bad indices and
/// InputError on a non-finite angle.
void apply_gate(StateVector& state, const GateOp& gate);

/// Applies the inverse of gate (same gate with the angle negated).
void apply_gate_inverse(StateVector& state, const GateOp& gate);

/// Runs every gate in order on |0...0>.
StateVector simulate(std::span<const GateOp> gates, int n_qubits);

/// <Z_qubit> of a normalized state.
double expectation_z(const StateVector& state, int qubit);

/// <Z_q> for every qubit, in one pass over the amplitudes.
std::vector<double> expectation_z_all(const StateVector& state);

double expectation(const StateVector& state, const ZSumObservable& observable);

struct AdjointResult {
  double expectation = 0.0;
  std::vector<double> gradient;  // indexed by trainable slot
};

/// Expectation of the observable and d<O>/d(angle) for every trainable slot,
/// computed by one forward sweep and one backward sweep. The gradient has
/// max(slot)+1 entries unless n_slots is larger.
AdjointResult adjoint_gradient(std::span<const GateOp> gates, const ZSumObservable& observable,
                               int n_qubits, std::size_t n_slots = 0);

/// Backward sweep only, starting from the already-simulated final state of
/// `gates`. Adds d<O>/d(angle) into gradient[slot].
void adjoint_backward(std::span<const GateOp> gates, const StateVector& final_state,
                      const ZSumObservable& observable, std::span<double> gradient);

}  // namespace qres
