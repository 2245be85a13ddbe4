#pragma once

// Federated training over the simulated constellation: the serverless ring
// protocol (each satellite trains the received model and forwards it to its
// neighbour) and the star-topology baseline with a server doing FedAvg.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orbqfl/cobyla.hpp"
#include "orbqfl/config.hpp"
#include "orbqfl/dataio.hpp"
#include "orbqfl/linkbudget.hpp"
#include "orbqfl/orbital.hpp"
#include "orbqfl/vqc.hpp"

namespace orbqfl::protocol {

enum class Mode { orb, server };

std::string_view to_string(Mode mode);
/// Accepts "orb" or "server"; throws ConfigError otherwise.
Mode parse_mode(std::string_view text);

/// Node id of the server / evaluation node in events and metrics.
inline constexpr int kServerNode = -1;

struct SimConfig {
  Mode mode = Mode::orb;
  std::size_t rounds = 5;
  orbital::ConstellationConfig constellation = default_constellation();
  linkbudget::LinkSpec s2s = linkbudget::preset_s2s();
  linkbudget::LinkSpec s2g = linkbudget::preset_s2g();
  linkbudget::LinkSpec g2s = linkbudget::preset_g2s();
  std::uint64_t seed = 0;
  vqc::FeatureMapSpec feature_map;
  vqc::AnsatzSpec ansatz;
  std::size_t n_classes = 2;
  cobyla::OptimizerConfig optimizer;
  bool enforce_line_of_sight = false;
  double los_retry_interval = 60.0;  // s between visibility samples
  std::size_t los_max_retries = 10000;
  double local_train_walltime = 0.0;  // s per local fit
  bool parallel_fits = false;         // server mode only

  std::size_t n_sats() const { return constellation.n_sats; }
  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;

  /// Quasi-ground server 20 m up, satellites at the constellation defaults.
  static orbital::ConstellationConfig default_constellation();
};

struct CommEvent {
  double time = 0.0;  // s, send time
  int src = 0;
  int dst = 0;
  double payload_bits = 0.0;
  double distance = 0.0;  // km
  double delay = 0.0;     // s
  double margin = 0.0;    // dB
  bool blocked = false;
};

struct RoundMetrics {
  std::size_t round = 0;
  int device = 0;  // kServerNode for the evaluation row
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double final_objective = 0.0;
  std::size_t evals_used = 0;
  double cumulative_sim_time = 0.0;
  double cumulative_bits = 0.0;
};

struct FitCall {
  std::size_t round = 0;
  int device = 0;
  bool warm_start = false;
  vqc::ParamVector theta_init;
};

struct RunResult {
  Mode mode = Mode::orb;
  std::vector<RoundMetrics> metrics;
  std::vector<CommEvent> events;
  std::vector<FitCall> fit_calls;
  vqc::ParamVector final_theta;
};

vqc::Classifier make_classifier(const SimConfig& config);

/// Ring protocol. Node 0 cold-starts in round 0; every other fit warm-starts
/// from the model just received. Throws std::invalid_argument when the shard
/// count differs from the satellite count and std::runtime_error when a
/// blocked link never clears under line-of-sight enforcement.
RunResult run_orb_qfl(const SimConfig& config, std::span<const dataio::Dataset> shards,
                      const dataio::Dataset& holdout);

/// Star baseline: every satellite fits from the global model, uplinks it, the
/// server averages by shard size and downlinks the result to every satellite.
RunResult run_server_qfl(const SimConfig& config, std::span<const dataio::Dataset> shards,
                         const dataio::Dataset& holdout);

RunResult run(const SimConfig& config, std::span<const dataio::Dataset> shards, const dataio::Dataset& holdout);

/// Elementwise weighted mean. Weights must be nonnegative and sum to 1
/// within 1e-9.
vqc::ParamVector fedavg(std::span<const vqc::ParamVector> params, std::span<const double> weights);

struct ServerEval {
  double accuracy = 0.0;
  double objective = 0.0;
};

ServerEval server_eval(const vqc::Classifier& clf, std::span<const double> theta, const dataio::Dataset& holdout);

struct BoundConstants {
  double L = 0.0;
  double mu = 0.0;
  std::vector<double> delta_schedule;  // Delta_t for t = 1, 2, ...; last value repeats
  double N = 0.0;
  double K = 0.0;
  double R = 0.0;
  double gamma_c = 0.0;
  double tau_c = 0.0;
  double delta_c = 0.0;
  double rho_loss = 0.0;
  double rho = 0.0;
  double eps_c = 0.0;
  double B = 0.0;
  double T = 0.0;
  double alpha_q = 0.0;
  double sigma_q = 0.0;
  double N_q = 0.0;
  double theta0_minus_thetastar_sq = 0.0;

  /// Every key is required; throws ConfigError naming a missing or invalid key.
  static BoundConstants from_config(const Config& cfg);
  void validate() const;
  /// Delta_t, padded with the last scheduled value; 0 for an empty schedule.
  double delta(std::size_t t) const;
};

/// Convergence bound after r rounds:
///   L sum_{t<=r} Delta_t + mu D exp(-mu Delta_r r / 2) + Delta_r / (N K)
///   + L Delta_r^2 / (N K) + gamma_c tau_c r + delta_c rho_loss rho
///   + eps_c (rho / B) T + alpha_q sigma_q^2 N_q
/// A ratio whose numerator is zero contributes zero even if its denominator
/// is; a nonzero numerator over zero throws std::invalid_argument.
double theorem1_bound(const BoundConstants& c, std::size_t r);

void write_metrics_csv(std::ostream& out, std::span<const RunResult> runs);
void write_events_csv(std::ostream& out, std::span<const RunResult> runs);
/// One row per round 1..R.
void write_bound_csv(std::ostream& out, const BoundConstants& c);

}  // namespace orbqfl::protocol
