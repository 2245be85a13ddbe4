#include "orbqfl/vqc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "orbqfl/rng.hpp"

namespace orbqfl::vqc {
namespace {

constexpr std::uint8_t kMagic[4] = {'O', 'Q', 'F', 'P'};

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> entangling_pairs(std::size_t n_qubits, Entangle pattern) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (n_qubits < 2) return pairs;
  for (std::size_t j = 0; j + 1 < n_qubits; ++j) pairs.emplace_back(j, j + 1);
  if (pattern == Entangle::ring && n_qubits > 2) pairs.emplace_back(n_qubits - 1, 0);
  return pairs;
}

qsim::Circuit feature_map_circuit(const FeatureMapSpec& spec) {
  if (spec.reps < 1) throw std::invalid_argument("feature map needs at least one repetition");
  using qsim::AngleBinding;
  using qsim::GateKind;
  qsim::Circuit c(spec.n_qubits);
  const double pi = std::numbers::pi;
  for (std::size_t r = 0; r < spec.reps; ++r) {
    for (std::size_t j = 0; j < spec.n_qubits; ++j) c.add(qsim::GateOp::h(j));
    for (std::size_t j = 0; j < spec.n_qubits; ++j) c.add(GateKind::RY, {j, 0}, AngleBinding::feature(j, pi));
    if (spec.encoding == Encoding::zz) {
      for (auto [j, k] : entangling_pairs(spec.n_qubits, Entangle::ring)) {
        c.add(qsim::GateOp::cx(j, k));
        c.add(GateKind::RZ, {k, 0}, AngleBinding::feature_product(j, k, pi));
        c.add(qsim::GateOp::cx(j, k));
      }
    }
  }
  return c;
}

qsim::Circuit ansatz_circuit(const AnsatzSpec& spec) {
  using qsim::AngleBinding;
  using qsim::GateKind;
  qsim::Circuit c(spec.n_qubits);
  const auto pairs = entangling_pairs(spec.n_qubits, spec.entangle);
  std::size_t slot = 0;
  for (std::size_t r = 0; r < spec.reps; ++r) {
    for (std::size_t j = 0; j < spec.n_qubits; ++j) c.add(GateKind::RY, {j, 0}, AngleBinding::parameter(slot++));
    for (auto [j, k] : pairs) c.add(qsim::GateOp::cz(j, k));
  }
  for (std::size_t j = 0; j < spec.n_qubits; ++j) c.add(GateKind::RY, {j, 0}, AngleBinding::parameter(slot++));
  return c;
}

std::vector<qsim::GateOp> encode(const FeatureMapSpec& spec, std::span<const double> x) {
  if (x.size() != spec.n_qubits) {
    throw std::invalid_argument(fmt::format("encode: {} features for {} qubits", x.size(), spec.n_qubits));
  }
  for (double v : x) {
    if (!(v >= -kFeatureTolerance && v <= 1.0 + kFeatureTolerance)) {
      throw std::invalid_argument(fmt::format("encode: feature {} outside [0, 1]", v));
    }
  }
  return feature_map_circuit(spec).bind(x, {});
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

Classifier::Classifier(FeatureMapSpec feature_map, AnsatzSpec ansatz, ClassifierSpec classes)
    : fm_spec_(feature_map),
      ansatz_spec_(ansatz),
      cls_spec_(std::move(classes)),
      fm_circuit_(feature_map_circuit(fm_spec_)),
      ansatz_circuit_(ansatz_circuit(ansatz_spec_)) {
  if (fm_spec_.n_qubits != ansatz_spec_.n_qubits) throw std::invalid_argument("feature map and ansatz qubit counts differ");
  if (cls_spec_.n_classes < 1) throw std::invalid_argument("classifier needs at least one class");
  const std::size_t dim = std::size_t{1} << fm_spec_.n_qubits;
  if (!cls_spec_.readout.empty()) {
    if (cls_spec_.readout.size() != dim) throw std::invalid_argument("readout must map every basis state");
    for (std::size_t c : cls_spec_.readout) {
      if (c >= cls_spec_.n_classes) throw std::invalid_argument("readout maps onto a nonexistent class");
    }
  }
}

ParamVector Classifier::random_parameters(std::uint64_t seed) const {
  Rng rng(seed);
  ParamVector theta(parameter_count());
  for (double& t : theta) t = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return theta;
}

void Classifier::check_theta(std::span<const double> theta) const {
  if (theta.size() != parameter_count()) {
    throw std::invalid_argument(fmt::format("expected {} parameters, got {}", parameter_count(), theta.size()));
  }
  for (double t : theta) {
    if (!std::isfinite(t)) throw std::invalid_argument("parameters must be finite");
  }
}

std::vector<qsim::StateVector> Classifier::encode_all(const Matrix& features) const {
  std::vector<qsim::StateVector> states;
  states.reserve(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto state = qsim::StateVector::zero(n_qubits());
    for (const auto& g : encode(fm_spec_, features.row(i))) state.apply(g);
    states.push_back(std::move(state));
  }
  return states;
}

std::vector<double> Classifier::class_probabilities(const qsim::StateVector& encoded,
                                                    std::span<const qsim::GateOp> ansatz) const {
  qsim::StateVector state = encoded;
  for (const auto& g : ansatz) state.apply(g);
  std::vector<double> probs(n_classes(), 0.0);
  const auto amps = state.amplitudes();
  for (std::size_t b = 0; b < amps.size(); ++b) probs[cls_spec_.class_of(b)] += std::norm(amps[b]);
  return probs;
}

std::vector<double> Classifier::forward(std::span<const double> x, std::span<const double> theta) const {
  check_theta(theta);
  auto state = qsim::StateVector::zero(n_qubits());
  for (const auto& g : encode(fm_spec_, x)) state.apply(g);
  return class_probabilities(state, ansatz_circuit_.bind({}, theta));
}

double Classifier::mean_cross_entropy(std::span<const qsim::StateVector> states, const Matrix& targets,
                                      std::span<const double> theta) const {
  const auto gates = ansatz_circuit_.bind({}, theta);
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto probs = class_probabilities(states[i], gates);
    for (std::size_t c = 0; c < probs.size(); ++c) {
      const double y = targets(i, c);
      if (y != 0.0) total -= y * std::log(std::max(probs[c], kProbabilityFloor));
    }
  }
  return total / static_cast<double>(states.size());
}

double Classifier::loss(const Matrix& features, const Matrix& targets, std::span<const double> theta) const {
  check_theta(theta);
  if (features.rows() == 0) throw std::invalid_argument("loss: empty data");
  if (targets.rows() != features.rows() || targets.cols() != n_classes()) {
    throw std::invalid_argument("loss: target matrix shape does not match the data");
  }
  return mean_cross_entropy(encode_all(features), targets, theta);
}

double Classifier::loss(const dataio::Dataset& data, std::span<const double> theta) const {
  return loss(data.features, dataio::one_hot(data.labels, n_classes()), theta);
}

double Classifier::accuracy(const dataio::Dataset& data, std::span<const double> theta) const {
  check_theta(theta);
  if (data.size() == 0) throw std::invalid_argument("accuracy: empty data");
  const auto gates = ansatz_circuit_.bind({}, theta);
  const auto states = encode_all(data.features);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (argmax(class_probabilities(states[i], gates)) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

FitResult Classifier::fit(const dataio::Dataset& data, const FitOptions& options) const {
  if (data.size() == 0) throw std::invalid_argument("fit: empty data");
  FitResult result;
  result.warm_started = options.warm_start;
  if (options.warm_start) {
    if (!options.init) throw std::invalid_argument("fit: warm start requested without initial parameters");
    check_theta(*options.init);
    result.theta_init = *options.init;
  } else {
    result.theta_init = random_parameters(options.seed);
  }

  const auto states = encode_all(data.features);
  const auto targets = dataio::one_hot(data.labels, n_classes());
  auto objective = [&](std::span<const double> theta) { return mean_cross_entropy(states, targets, theta); };

  const auto opt = cobyla::minimize(objective, result.theta_init, options.optimizer);
  result.theta = opt.x_best;
  result.objective_trace = opt.trace.evaluations;
  result.iterations = opt.trace.iterations.size();
  if (opt.trace.evaluations.empty()) {
    result.initial_objective = objective(result.theta_init);
    result.final_objective = result.initial_objective;
  } else {
    result.initial_objective = opt.trace.evaluations.front();
    result.final_objective = opt.f_best;
  }
  return result;
}

std::vector<std::uint8_t> serialize_params(std::span<const double> theta) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u64(out, kParamFormatVersion, 4);
  put_u64(out, theta.size(), 8);
  for (double t : theta) put_u64(out, std::bit_cast<std::uint64_t>(t), 8);
  return out;
}

ParamVector deserialize_params(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kParamHeaderBytes || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw std::invalid_argument("parameter blob: bad magic");
  }
  if (get_u64(bytes, 4, 4) != kParamFormatVersion) throw std::invalid_argument("parameter blob: unsupported version");
  const std::uint64_t count = get_u64(bytes, 8, 8);
  if (bytes.size() != kParamHeaderBytes + 8 * count) throw std::invalid_argument("parameter blob: length mismatch");
  ParamVector theta(count);
  for (std::size_t i = 0; i < count; ++i) theta[i] = std::bit_cast<double>(get_u64(bytes, kParamHeaderBytes + 8 * i, 8));
  return theta;
}

double payload_bits(std::size_t parameter_count) {
  return 8.0 * static_cast<double>(kParamHeaderBytes + 8 * parameter_count);
}

}  // namespace orbqfl::vqc
