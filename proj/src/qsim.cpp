#include "orbqfl/qsim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace orbqfl::qsim {

std::size_t arity(GateKind kind) { return (kind == GateKind::CX || kind == GateKind::CZ) ? 2 : 1; }

bool is_rotation(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

StateVector StateVector::zero(std::size_t n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument(fmt::format("qubit count {} outside [1, {}]", n_qubits, kMaxQubits));
  }
  std::vector<Amplitude> amps(std::size_t{1} << n_qubits);
  amps[0] = 1.0;
  return {n_qubits, std::move(amps)};
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
  const std::size_t dim = amplitudes.size();
  if (dim < 2 || (dim & (dim - 1)) != 0) throw std::invalid_argument("amplitude count must be a power of two >= 2");
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if (n > kMaxQubits) throw std::invalid_argument("too many qubits");
  return {n, std::move(amplitudes)};
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

std::array<Amplitude, 4> single_qubit_matrix(GateKind kind, double angle) {
  using namespace std::complex_literals;
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  switch (kind) {
    case GateKind::H: {
      const double r = std::numbers::sqrt2 / 2.0;
      return {r, r, r, -r};
    }
    case GateKind::RX:
      return {c, -1i * s, -1i * s, c};
    case GateKind::RY:
      return {c, -s, s, c};
    case GateKind::RZ:
      return {std::polar(1.0, -angle / 2.0), 0.0, 0.0, std::polar(1.0, angle / 2.0)};
    default:
      throw std::invalid_argument("single_qubit_matrix: not a single-qubit gate");
  }
}

void StateVector::apply_single(std::size_t q, const std::array<Amplitude, 4>& m) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    const Amplitude a0 = amps_[i];
    const Amplitude a1 = amps_[i | bit];
    amps_[i] = m[0] * a0 + m[1] * a1;
    amps_[i | bit] = m[2] * a0 + m[3] * a1;
  }
}

void StateVector::apply(const GateOp& gate) {
  const std::size_t k = arity(gate.kind);
  for (std::size_t t = 0; t < k; ++t) {
    if (gate.targets[t] >= n_qubits_) {
      throw std::invalid_argument(fmt::format("gate target {} out of range for {} qubits", gate.targets[t], n_qubits_));
    }
  }
  if (k == 2 && gate.targets[0] == gate.targets[1]) throw std::invalid_argument("two-qubit gate targets must differ");
  if (!std::isfinite(gate.angle)) throw std::invalid_argument("gate angle must be finite");

  switch (gate.kind) {
    case GateKind::CX: {
      const std::size_t cbit = std::size_t{1} << gate.targets[0];
      const std::size_t tbit = std::size_t{1} << gate.targets[1];
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
      }
      break;
    }
    case GateKind::CZ: {
      const std::size_t mask = (std::size_t{1} << gate.targets[0]) | (std::size_t{1} << gate.targets[1]);
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & mask) == mask) amps_[i] = -amps_[i];
      }
      break;
    }
    default:
      apply_single(gate.targets[0], single_qubit_matrix(gate.kind, gate.angle));
  }
}

StateVector init_zero(std::size_t n_qubits) { return StateVector::zero(n_qubits); }

StateVector apply_gate(StateVector state, const GateOp& gate) {
  state.apply(gate);
  return state;
}

std::vector<double> probabilities(const StateVector& state) {
  std::vector<double> p;
  p.reserve(state.dimension());
  for (const auto& a : state.amplitudes()) p.push_back(std::norm(a));
  return p;
}

double AngleBinding::resolve(std::span<const double> features, std::span<const double> params) const {
  auto at = [](std::span<const double> v, std::size_t i, const char* what) {
    if (i >= v.size()) throw std::out_of_range(fmt::format("unbound {} slot {}", what, i));
    return v[i];
  };
  switch (source) {
    case AngleSource::fixed:
      return value;
    case AngleSource::feature:
      return scale * at(features, index, "feature");
    case AngleSource::parameter:
      return scale * at(params, index, "parameter");
    case AngleSource::feature_product:
      return scale * at(features, index, "feature") * at(features, index2, "feature");
  }
  return value;
}

Circuit::Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument(fmt::format("qubit count {} outside [1, {}]", n_qubits, kMaxQubits));
  }
}

void Circuit::check_targets(GateKind kind, const std::array<std::size_t, 2>& targets) const {
  const std::size_t k = arity(kind);
  for (std::size_t t = 0; t < k; ++t) {
    if (targets[t] >= n_qubits_) throw std::invalid_argument(fmt::format("gate target {} out of range", targets[t]));
  }
  if (k == 2 && targets[0] == targets[1]) throw std::invalid_argument("two-qubit gate targets must differ");
}

void Circuit::add(const GateOp& gate) {
  if (!std::isfinite(gate.angle)) throw std::invalid_argument("gate angle must be finite");
  add(gate.kind, gate.targets, AngleBinding::constant(gate.angle));
}

void Circuit::add(GateKind kind, std::array<std::size_t, 2> targets, AngleBinding angle) {
  check_targets(kind, targets);
  if (arity(kind) == 1) targets[1] = 0;
  ops_.push_back({kind, targets, angle});
}

void Circuit::append(const Circuit& other) {
  if (other.n_qubits_ != n_qubits_) throw std::invalid_argument("Circuit::append: qubit count mismatch");
  ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
}

std::size_t Circuit::feature_slots() const {
  std::size_t n = 0;
  for (const auto& op : ops_) {
    if (op.angle.source == AngleSource::feature) n = std::max(n, op.angle.index + 1);
    if (op.angle.source == AngleSource::feature_product) n = std::max({n, op.angle.index + 1, op.angle.index2 + 1});
  }
  return n;
}

std::size_t Circuit::parameter_slots() const {
  std::size_t n = 0;
  for (const auto& op : ops_) {
    if (op.angle.source == AngleSource::parameter) n = std::max(n, op.angle.index + 1);
  }
  return n;
}

std::vector<GateOp> Circuit::bind(std::span<const double> features, std::span<const double> params) const {
  std::vector<GateOp> gates;
  gates.reserve(ops_.size());
  for (const auto& op : ops_) {
    const double angle = is_rotation(op.kind) ? op.angle.resolve(features, params) : 0.0;
    if (!std::isfinite(angle)) throw std::invalid_argument("bound angle is not finite");
    gates.push_back({op.kind, op.targets, angle});
  }
  return gates;
}

StateVector run(const Circuit& circuit, std::span<const double> features, std::span<const double> params) {
  return run_from(StateVector::zero(circuit.n_qubits()), circuit, features, params);
}

StateVector run_from(StateVector state, const Circuit& circuit, std::span<const double> features,
                     std::span<const double> params) {
  if (state.n_qubits() != circuit.n_qubits()) throw std::invalid_argument("run_from: qubit count mismatch");
  for (const auto& gate : circuit.bind(features, params)) state.apply(gate);
  return state;
}

}  // namespace orbqfl::qsim
