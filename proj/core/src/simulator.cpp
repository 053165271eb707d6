#include "qres/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qres/errors.hpp"

namespace qres {

namespace {

// Every gate in the set, and every gate derivative, is one of three 2x2
// shapes, each with its own kernel:
//   Real:  [[p, -q], [q, p]]        (RY family)
//   Cross: [[p, -iq], [-iq, p]]     (RX family)
//   Diag:  diag(d0, d1)             (RZ family)
struct GateMatrix {
  enum class Shape { Real, Cross, Diag } shape;
  double p = 0.0;
  double q = 0.0;
  Complex d0, d1;
};

GateMatrix rotation_matrix(GateKind kind, double angle) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  switch (kind) {
    case GateKind::RX:
    case GateKind::CRX:
      return {GateMatrix::Shape::Cross, c, s, {}, {}};
    case GateKind::RY:
    case GateKind::CRY:
      return {GateMatrix::Shape::Real, c, s, {}, {}};
    case GateKind::RZ:
    case GateKind::CRZ:
      return {GateMatrix::Shape::Diag, 0.0, 0.0, Complex{c, -s}, Complex{c, s}};
  }
  throw UnsupportedGateError("unknown gate kind " + std::to_string(static_cast<int>(kind)));
}

// d/d(angle) of rotation_matrix: -i/2 * P * U(angle).
GateMatrix derivative_matrix(GateKind kind, double angle) {
  const double c = std::cos(angle / 2) / 2;
  const double s = std::sin(angle / 2) / 2;
  switch (kind) {
    case GateKind::RX:
    case GateKind::CRX:
      return {GateMatrix::Shape::Cross, -s, c, {}, {}};
    case GateKind::RY:
    case GateKind::CRY:
      return {GateMatrix::Shape::Real, -s, c, {}, {}};
    case GateKind::RZ:
    case GateKind::CRZ:
      return {GateMatrix::Shape::Diag, 0.0, 0.0, Complex{-s, -c}, Complex{-s, c}};
  }
  throw UnsupportedGateError("no derivative for gate kind " +
                             std::to_string(static_cast<int>(kind)));
}

// Calls f(i0, i1) for every amplitude pair differing in the target bit,
// restricted to the control bit being 1 when a control is present.
template <class F>
inline void for_each_pair(std::size_t dim, int target, int control, F&& f) {
  const std::size_t ts = std::size_t{1} << target;
  if (control < 0) {
    for (std::size_t base = 0; base < dim; base += 2 * ts) {
      for (std::size_t j = base; j < base + ts; ++j) f(j, j + ts);
    }
    return;
  }
  const std::size_t cmask = std::size_t{1} << control;
  const std::size_t ls = std::size_t{1} << std::min(target, control);
  const std::size_t hs = std::size_t{1} << std::max(target, control);
  for (std::size_t h = 0; h < dim; h += 2 * hs) {
    for (std::size_t l = h; l < h + hs; l += 2 * ls) {
      for (std::size_t j = l; j < l + ls; ++j) {
        const std::size_t i0 = j | cmask;
        f(i0, i0 | ts);
      }
    }
  }
}

// Local 2x2 action of a GateMatrix on one amplitude pair.
template <GateMatrix::Shape S>
inline void mul_pair(const GateMatrix& m, Complex x, Complex y, Complex& u, Complex& v) {
  if constexpr (S == GateMatrix::Shape::Real) {
    u = m.p * x - m.q * y;
    v = m.q * x + m.p * y;
  } else if constexpr (S == GateMatrix::Shape::Cross) {
    u = {m.p * x.real() + m.q * y.imag(), m.p * x.imag() - m.q * y.real()};
    v = {m.p * y.real() + m.q * x.imag(), m.p * y.imag() - m.q * x.real()};
  } else {
    u = m.d0 * x;
    v = m.d1 * y;
  }
}

inline double re_conj_dot(Complex u, Complex v) { return u.real() * v.real() + u.imag() * v.imag(); }

template <GateMatrix::Shape S>
void apply_matrix_impl(Complex* a, std::size_t dim, int target, int control, const GateMatrix& m) {
  for_each_pair(dim, target, control,
                [&](std::size_t i0, std::size_t i1) { mul_pair<S>(m, a[i0], a[i1], a[i0], a[i1]); });
}

void apply_matrix(std::span<Complex> amps, int target, int control, const GateMatrix& m) {
  switch (m.shape) {
    case GateMatrix::Shape::Real:
      return apply_matrix_impl<GateMatrix::Shape::Real>(amps.data(), amps.size(), target, control, m);
    case GateMatrix::Shape::Cross:
      return apply_matrix_impl<GateMatrix::Shape::Cross>(amps.data(), amps.size(), target, control,
                                                         m);
    case GateMatrix::Shape::Diag:
      return apply_matrix_impl<GateMatrix::Shape::Diag>(amps.data(), amps.size(), target, control, m);
  }
}

// One backward step of the adjoint sweep, fused into a single pass:
// psi <- U^-1 psi, acc += Re <lambda| dU |psi>, lambda <- U^-1 lambda.
template <GateMatrix::Shape S>
double backward_step_impl(Complex* psi, Complex* lambda, std::size_t dim, int target, int control,
                          const GateMatrix& inverse, const GateMatrix* derivative) {
  double acc = 0.0;
  for_each_pair(dim, target, control, [&](std::size_t i0, std::size_t i1) {
    Complex x, y;
    mul_pair<S>(inverse, psi[i0], psi[i1], x, y);
    psi[i0] = x;
    psi[i1] = y;
    const Complex l0 = lambda[i0], l1 = lambda[i1];
    if (derivative) {
      Complex u, v;
      mul_pair<S>(*derivative, x, y, u, v);
      acc += re_conj_dot(l0, u) + re_conj_dot(l1, v);
    }
    mul_pair<S>(inverse, l0, l1, lambda[i0], lambda[i1]);
  });
  return acc;
}

double backward_step(std::span<Complex> psi, std::span<Complex> lambda, int target, int control,
                     const GateMatrix& inverse, const GateMatrix* derivative) {
  switch (inverse.shape) {
    case GateMatrix::Shape::Real:
      return backward_step_impl<GateMatrix::Shape::Real>(psi.data(), lambda.data(), psi.size(),
                                                         target, control, inverse, derivative);
    case GateMatrix::Shape::Cross:
      return backward_step_impl<GateMatrix::Shape::Cross>(psi.data(), lambda.data(), psi.size(),
                                                          target, control, inverse, derivative);
    case GateMatrix::Shape::Diag:
      return backward_step_impl<GateMatrix::Shape::Diag>(psi.data(), lambda.data(), psi.size(),
                                                         target, control, inverse, derivative);
  }
  return 0.0;
}

void validate_gate(const GateOp& gate, int n_qubits) {
  if (gate.target < 0 || gate.target >= n_qubits) {
    throw StructuralError("gate target " + std::to_string(gate.target) + " out of range for " +
                          std::to_string(n_qubits) + " qubits");
  }
  if (is_controlled(gate.kind) != gate.control.has_value()) {
    throw StructuralError("control qubit must be present exactly for controlled gates");
  }
  if (gate.control) {
    const int c = *gate.control;
    if (c < 0 || c >= n_qubits) {
      throw StructuralError("gate control " + std::to_string(c) + " out of range");
    }
    if (c == gate.target) {
      throw StructuralError("control and target coincide on qubit " + std::to_string(c));
    }
  }
  if (!std::isfinite(gate.angle)) {
    throw InputError("non-finite gate angle");
  }
}

int control_of(const GateOp& gate) { return gate.control ? *gate.control : -1; }

void validate_observable(const ZSumObservable& observable, int n_qubits) {
  if (observable.weights.size() != static_cast<std::size_t>(n_qubits)) {
    throw StructuralError("observable has " + std::to_string(observable.weights.size()) +
                          " weights for " + std::to_string(n_qubits) + " qubits");
  }
  for (double w : observable.weights) {
    if (!std::isfinite(w)) throw InputError("non-finite observable weight");
  }
}

// Diagonal of the Z-sum observable evaluated at basis index i.
double z_sum_diagonal(std::size_t i, std::span<const double> weights) {
  double d = 0.0;
  for (std::size_t q = 0; q < weights.size(); ++q) {
    d += ((i >> q) & 1U) ? -weights[q] : weights[q];
  }
  return d;
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw ConfigError("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                      std::to_string(kMaxQubits) + "]");
  }
  amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  amplitudes_[0] = 1.0;
}

double StateVector::norm_squared() const {
  double acc = 0.0;
  for (const Complex& a : amplitudes_) acc += std::norm(a);
  return acc;
}

StateVector init_zero_state(int n_qubits) { return StateVector(n_qubits); }

void apply_gate(StateVector& state, const GateOp& gate) {
  validate_gate(gate, state.n_qubits());
  apply_matrix(state.amplitudes(), gate.target, control_of(gate),
               rotation_matrix(gate.kind, gate.angle));
}

void apply_gate_inverse(StateVector& state, const GateOp& gate) {
  validate_gate(gate, state.n_qubits());
  apply_matrix(state.amplitudes(), gate.target, control_of(gate),
               rotation_matrix(gate.kind, -gate.angle));
}

StateVector simulate(std::span<const GateOp> gates, int n_qubits) {
  StateVector state(n_qubits);
  for (const GateOp& g : gates) apply_gate(state, g);
  return state;
}

double expectation_z(const StateVector& state, int qubit) {
  if (qubit < 0 || qubit >= state.n_qubits()) {
    throw StructuralError("qubit " + std::to_string(qubit) + " out of range");
  }
  const auto amps = state.amplitudes();
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    acc += ((i >> qubit) & 1U) ? -p : p;
  }
  return acc;
}

std::vector<double> expectation_z_all(const StateVector& state) {
  const int n = state.n_qubits();
  std::vector<double> z(static_cast<std::size_t>(n), 0.0);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    for (int q = 0; q < n; ++q) z[q] += ((i >> q) & 1U) ? -p : p;
  }
  return z;
}

double expectation(const StateVector& state, const ZSumObservable& observable) {
  validate_observable(observable, state.n_qubits());
  const auto amps = state.amplitudes();
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    acc += z_sum_diagonal(i, observable.weights) * std::norm(amps[i]);
  }
  return acc;
}

void adjoint_backward(std::span<const GateOp> gates, const StateVector& final_state,
                      const ZSumObservable& observable, std::span<double> gradient) {
  const int n = final_state.n_qubits();
  validate_observable(observable, n);
  for (const GateOp& g : gates) {
    validate_gate(g, n);
    if (g.trainable_slot && *g.trainable_slot >= gradient.size()) {
      throw StructuralError("trainable slot " + std::to_string(*g.trainable_slot) +
                            " exceeds gradient length " + std::to_string(gradient.size()));
    }
  }

  StateVector psi = final_state;
  StateVector lambda = final_state;
  {
    auto l = lambda.amplitudes();
    for (std::size_t i = 0; i < l.size(); ++i) l[i] *= z_sum_diagonal(i, observable.weights);
  }

  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    const GateOp& g = *it;
    const GateMatrix inverse = rotation_matrix(g.kind, -g.angle);
    if (g.trainable_slot) {
      const GateMatrix derivative = derivative_matrix(g.kind, g.angle);
      gradient[*g.trainable_slot] += 2.0 * backward_step(psi.amplitudes(), lambda.amplitudes(),
                                                         g.target, control_of(g), inverse,
                                                         &derivative);
    } else {
      backward_step(psi.amplitudes(), lambda.amplitudes(), g.target, control_of(g), inverse,
                    nullptr);
    }
  }
}

AdjointResult adjoint_gradient(std::span<const GateOp> gates, const ZSumObservable& observable,
                               int n_qubits, std::size_t n_slots) {
  std::size_t slots = n_slots;
  for (const GateOp& g : gates) {
    if (g.trainable_slot) slots = std::max(slots, *g.trainable_slot + 1);
  }
  const StateVector final_state = simulate(gates, n_qubits);
  AdjointResult result;
  result.expectation = expectation(final_state, observable);
  result.gradient.assign(slots, 0.0);
  adjoint_backward(gates, final_state, observable, result.gradient);
  return result;
}

}  // namespace qres
