#pragma once

// Variational quantum classifier: a data-encoding feature map followed by a
// hardware-efficient RY/CZ ansatz, read out by mapping basis states onto
// classes, trained with COBYLA on a cross-entropy objective.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "orbqfl/cobyla.hpp"
#include "orbqfl/dataio.hpp"
#include "orbqfl/matrix.hpp"
#include "orbqfl/qsim.hpp"

namespace orbqfl::vqc {

using ParamVector = std::vector<double>;

inline constexpr double kProbabilityFloor = 1e-12;
/// Features may overshoot [0,1] by this much before encode() rejects them.
inline constexpr double kFeatureTolerance = 1e-9;

enum class Encoding { angle, zz };
enum class Entangle { ring, line };

struct FeatureMapSpec {
  std::size_t n_qubits = 4;
  // In angle mode H RY(a) H = RY(-a), so two repetitions cancel exactly and
  // any odd count equals one. Repetition only matters for zz.
  std::size_t reps = 1;
  Encoding encoding = Encoding::angle;
};

struct AnsatzSpec {
  std::size_t n_qubits = 4;
  std::size_t reps = 2;
  Entangle entangle = Entangle::ring;

  std::size_t parameter_count() const { return n_qubits * (reps + 1); }
};

struct ClassifierSpec {
  std::size_t n_classes = 2;
  /// Class of each basis index; empty means index mod n_classes.
  std::vector<std::size_t> readout;

  std::size_t class_of(std::size_t basis_index) const {
    return readout.empty() ? basis_index % n_classes : readout[basis_index];
  }
};

/// Qubit pairs coupled by one entangling layer. A two-qubit ring has a
/// single pair so that the layer is not applied twice.
std::vector<std::pair<std::size_t, std::size_t>> entangling_pairs(std::size_t n_qubits, Entangle pattern);

/// Per rep: H on every qubit, RY(pi x_j) on qubit j; zz adds
/// CX(j,k) RZ(pi x_j x_k) CX(j,k) over ring pairs. Angles bound to feature slots.
qsim::Circuit feature_map_circuit(const FeatureMapSpec& spec);

/// Per rep: RY(theta) on every qubit then CZ over the entangling pairs;
/// closed by a final RY layer. Angles bound to parameter slots.
qsim::Circuit ansatz_circuit(const AnsatzSpec& spec);

/// The feature map with `x` substituted. Throws std::invalid_argument when x
/// has the wrong length or leaves [0,1].
std::vector<qsim::GateOp> encode(const FeatureMapSpec& spec, std::span<const double> x);

struct FitOptions {
  std::optional<ParamVector> init;  // required when warm_start is set
  bool warm_start = false;
  cobyla::OptimizerConfig optimizer;
  std::uint64_t seed = 0;  // cold-start initialization
};

struct FitResult {
  ParamVector theta;
  ParamVector theta_init;
  std::vector<double> objective_trace;  // every objective evaluation
  std::size_t iterations = 0;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  bool warm_started = false;
};

class Classifier {
 public:
  /// Throws std::invalid_argument when the specs disagree on qubit count or
  /// the readout is not a total map onto the classes.
  Classifier(FeatureMapSpec feature_map, AnsatzSpec ansatz, ClassifierSpec classes);

  const FeatureMapSpec& feature_map() const { return fm_spec_; }
  const AnsatzSpec& ansatz() const { return ansatz_spec_; }
  const ClassifierSpec& classes() const { return cls_spec_; }
  std::size_t n_qubits() const { return fm_spec_.n_qubits; }
  std::size_t n_classes() const { return cls_spec_.n_classes; }
  std::size_t parameter_count() const { return ansatz_spec_.parameter_count(); }

  /// Uniform in [-pi, pi).
  ParamVector random_parameters(std::uint64_t seed) const;

  /// Class probabilities, summing to 1.
  std::vector<double> forward(std::span<const double> x, std::span<const double> theta) const;

  /// Mean cross-entropy against one-hot (or soft) targets.
  double loss(const Matrix& features, const Matrix& targets, std::span<const double> theta) const;
  double loss(const dataio::Dataset& data, std::span<const double> theta) const;

  /// Fraction of rows whose argmax class (ties to the lowest index) matches.
  double accuracy(const dataio::Dataset& data, std::span<const double> theta) const;

  FitResult fit(const dataio::Dataset& data, const FitOptions& options) const;

 private:
  // Encoded feature-map states do not depend on theta, so a training set is
  // encoded once and reused for every objective evaluation.
  std::vector<qsim::StateVector> encode_all(const Matrix& features) const;
  std::vector<double> class_probabilities(const qsim::StateVector& encoded, std::span<const qsim::GateOp> ansatz) const;
  double mean_cross_entropy(std::span<const qsim::StateVector> states, const Matrix& targets,
                            std::span<const double> theta) const;
  void check_theta(std::span<const double> theta) const;

  FeatureMapSpec fm_spec_;
  AnsatzSpec ansatz_spec_;
  ClassifierSpec cls_spec_;
  qsim::Circuit fm_circuit_;
  qsim::Circuit ansatz_circuit_;
};

/// Index of the largest entry; ties resolve to the lowest index.
std::size_t argmax(std::span<const double> values);

// Parameter wire format: 16-byte header then little-endian IEEE-754 doubles.
//   bytes 0-3   magic "OQFP"
//   bytes 4-7   version (uint32 LE, currently 1)
//   bytes 8-15  count (uint64 LE)
inline constexpr std::uint32_t kParamFormatVersion = 1;
inline constexpr std::size_t kParamHeaderBytes = 16;

std::vector<std::uint8_t> serialize_params(std::span<const double> theta);
/// Throws std::invalid_argument on a bad header or length.
ParamVector deserialize_params(std::span<const std::uint8_t> bytes);
/// Size of serialize_params output, in bits.
double payload_bits(std::size_t parameter_count);

}  // namespace orbqfl::vqc
