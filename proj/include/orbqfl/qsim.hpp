#pragma once

// Dense statevector simulator for small circuits.
//
// Bit order is little-endian: qubit k is bit k of the basis index, so on two
// qubits index 1 is "qubit 0 set" and index 2 is "qubit 1 set".

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace orbqfl::qsim {

inline constexpr std::size_t kMaxQubits = 12;

using Amplitude = std::complex<double>;

enum class GateKind { H, RX, RY, RZ, CX, CZ };

/// Number of qubits a gate acts on.
std::size_t arity(GateKind kind);
bool is_rotation(GateKind kind);

/// A concrete gate. For CX, targets[0] is the control.
struct GateOp {
  GateKind kind = GateKind::H;
  std::array<std::size_t, 2> targets{};
  double angle = 0.0;

  static GateOp h(std::size_t q) { return {GateKind::H, {q, 0}, 0.0}; }
  static GateOp rx(std::size_t q, double a) { return {GateKind::RX, {q, 0}, a}; }
  static GateOp ry(std::size_t q, double a) { return {GateKind::RY, {q, 0}, a}; }
  static GateOp rz(std::size_t q, double a) { return {GateKind::RZ, {q, 0}, a}; }
  static GateOp cx(std::size_t control, std::size_t target) { return {GateKind::CX, {control, target}, 0.0}; }
  static GateOp cz(std::size_t a, std::size_t b) { return {GateKind::CZ, {a, b}, 0.0}; }

  bool operator==(const GateOp&) const = default;
};

class StateVector {
 public:
  /// |0...0> on n qubits; throws std::invalid_argument outside [1, kMaxQubits].
  static StateVector zero(std::size_t n_qubits);
  /// Takes amplitudes as given (no renormalization); size must be a power of two.
  static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  double norm_squared() const;

  /// In-place gate application. Throws std::invalid_argument on a bad target.
  void apply(const GateOp& gate);

 private:
  StateVector(std::size_t n, std::vector<Amplitude> amps) : n_qubits_(n), amps_(std::move(amps)) {}

  void apply_single(std::size_t q, const std::array<Amplitude, 4>& m);

  std::size_t n_qubits_ = 0;
  std::vector<Amplitude> amps_;
};

StateVector init_zero(std::size_t n_qubits);
StateVector apply_gate(StateVector state, const GateOp& gate);
/// |amplitude|^2 per basis index.
std::vector<double> probabilities(const StateVector& state);

/// 2x2 unitary of a single-qubit gate, row-major.
std::array<Amplitude, 4> single_qubit_matrix(GateKind kind, double angle);

// Where a rotation angle comes from when a circuit is bound.
enum class AngleSource {
  fixed,            // value
  feature,          // scale * x[index]
  parameter,        // scale * theta[index]
  feature_product,  // scale * x[index] * x[index2]
};

struct AngleBinding {
  AngleSource source = AngleSource::fixed;
  std::size_t index = 0;
  std::size_t index2 = 0;
  double scale = 1.0;
  double value = 0.0;

  static AngleBinding constant(double v) { return {AngleSource::fixed, 0, 0, 1.0, v}; }
  static AngleBinding feature(std::size_t i, double scale = 1.0) { return {AngleSource::feature, i, 0, scale, 0.0}; }
  static AngleBinding parameter(std::size_t i, double scale = 1.0) { return {AngleSource::parameter, i, 0, scale, 0.0}; }
  static AngleBinding feature_product(std::size_t i, std::size_t j, double scale = 1.0) {
    return {AngleSource::feature_product, i, j, scale, 0.0};
  }

  /// Throws std::out_of_range if the slot it reads is not bound.
  double resolve(std::span<const double> features, std::span<const double> params) const;
};

struct CircuitOp {
  GateKind kind = GateKind::H;
  std::array<std::size_t, 2> targets{};
  AngleBinding angle;
};

// Ordered gate list whose rotation angles may refer to slots of an external
// feature vector or parameter vector.
class Circuit {
 public:
  explicit Circuit(std::size_t n_qubits);

  std::size_t n_qubits() const { return n_qubits_; }
  std::span<const CircuitOp> ops() const { return ops_; }

  void add(const GateOp& gate);
  void add(GateKind kind, std::array<std::size_t, 2> targets, AngleBinding angle);
  void append(const Circuit& other);

  /// Highest feature / parameter slot referenced, plus one.
  std::size_t feature_slots() const;
  std::size_t parameter_slots() const;

  /// Concrete gates with every slot resolved.
  std::vector<GateOp> bind(std::span<const double> features, std::span<const double> params) const;

 private:
  void check_targets(GateKind kind, const std::array<std::size_t, 2>& targets) const;

  std::size_t n_qubits_;
  std::vector<CircuitOp> ops_;
};

/// Applies the bound circuit to |0...0>.
StateVector run(const Circuit& circuit, std::span<const double> features, std::span<const double> params);
/// Applies the bound circuit to a given starting state.
StateVector run_from(StateVector state, const Circuit& circuit, std::span<const double> features,
                     std::span<const double> params);

}  // namespace orbqfl::qsim
