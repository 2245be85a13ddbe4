#include "orbqfl/protocol.hpp"

#include <cmath>
#include <functional>
#include <future>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "orbqfl/errors.hpp"
#include "orbqfl/rng.hpp"

namespace orbqfl::protocol {
namespace {

using orbital::EciPoint;

// Positions of the two link endpoints at a given time.
using Geometry = std::function<std::pair<EciPoint, EciPoint>(double)>;

struct Clock {
  double now = 0.0;
  double bits = 0.0;
};

// Sends one model. Under line-of-sight enforcement a blocked attempt is
// logged and retried after the configured interval.
void transmit(const SimConfig& cfg, std::vector<CommEvent>& events, Clock& clock, int src, int dst,
              const linkbudget::LinkSpec& link, double payload, const Geometry& geometry) {
  for (std::size_t attempt = 0;; ++attempt) {
    const auto [a, b] = geometry(clock.now);
    CommEvent ev;
    ev.time = clock.now;
    ev.src = src;
    ev.dst = dst;
    ev.payload_bits = payload;
    ev.distance = orbital::distance(a, b);
    ev.delay = linkbudget::transmission_delay(payload, link.bitrate, ev.distance);
    ev.margin = linkbudget::link_budget(link, ev.distance).margin;
    ev.blocked = cfg.enforce_line_of_sight && !orbital::line_of_sight(a.position, b.position);
    events.push_back(ev);
    if (!ev.blocked) {
      clock.now += ev.delay;
      clock.bits += payload;
      return;
    }
    if (attempt >= cfg.los_max_retries) {
      throw std::runtime_error(fmt::format("link {} -> {} still blocked after {} retries at t = {} s", src, dst,
                                           cfg.los_max_retries, clock.now));
    }
    clock.now += cfg.los_retry_interval;
  }
}

void check_shards(const SimConfig& cfg, std::span<const dataio::Dataset> shards, const dataio::Dataset& holdout) {
  cfg.validate();
  if (shards.size() != cfg.n_sats()) {
    throw std::invalid_argument(fmt::format("{} data shards for {} satellites", shards.size(), cfg.n_sats()));
  }
  for (const auto& s : shards) {
    if (s.size() == 0) throw std::invalid_argument("every satellite needs a nonempty shard");
  }
  if (holdout.size() == 0) throw std::invalid_argument("holdout set is empty");
}

dataio::Dataset all_training(std::span<const dataio::Dataset> shards) {
  dataio::Dataset all = shards.front();
  for (std::size_t i = 1; i < shards.size(); ++i) all = dataio::concat(all, shards[i]);
  return all;
}

RoundMetrics server_row(const vqc::Classifier& clf, std::span<const double> theta, const dataio::Dataset& train,
                        const dataio::Dataset& holdout, std::size_t round, const Clock& clock) {
  const auto eval = server_eval(clf, theta, holdout);
  RoundMetrics m;
  m.round = round;
  m.device = kServerNode;
  m.train_accuracy = clf.accuracy(train, theta);
  m.test_accuracy = eval.accuracy;
  m.final_objective = eval.objective;
  m.cumulative_sim_time = clock.now;
  m.cumulative_bits = clock.bits;
  return m;
}

RoundMetrics device_row(const vqc::Classifier& clf, const vqc::FitResult& fit, const dataio::Dataset& shard,
                        const dataio::Dataset& holdout, std::size_t round, int device, const Clock& clock) {
  RoundMetrics m;
  m.round = round;
  m.device = device;
  m.train_accuracy = clf.accuracy(shard, fit.theta);
  m.test_accuracy = clf.accuracy(holdout, fit.theta);
  m.final_objective = fit.final_objective;
  m.evals_used = fit.objective_trace.size();
  m.cumulative_sim_time = clock.now;
  m.cumulative_bits = clock.bits;
  return m;
}

std::string node_name(int id) { return id == kServerNode ? "server" : std::to_string(id); }

double ratio(double num, double den, const char* what) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) throw std::invalid_argument(fmt::format("bound term {} divides by zero", what));
  return num / den;
}

}  // namespace

std::string_view to_string(Mode mode) { return mode == Mode::orb ? "orb" : "server"; }

Mode parse_mode(std::string_view text) {
  if (text == "orb") return Mode::orb;
  if (text == "server") return Mode::server;
  throw ConfigError(fmt::format("unknown mode '{}' (expected orb or server)", text));
}

orbital::ConstellationConfig SimConfig::default_constellation() {
  orbital::ConstellationConfig c;
  c.geo_server_altitude = 0.02;
  return c;
}

void SimConfig::validate() const {
  if (rounds < 1) throw ConfigError("rounds must be at least 1");
  if (n_sats() < 2) throw ConfigError("n_sats must be at least 2");
  if (feature_map.n_qubits != ansatz.n_qubits) throw ConfigError("feature map and ansatz qubit counts differ");
  if (feature_map.reps < 1) throw ConfigError("feature map reps must be at least 1");
  if (n_classes < 1 || feature_map.n_qubits >= 63 || n_classes > (std::size_t{1} << feature_map.n_qubits)) {
    throw ConfigError("n_classes must be between 1 and 2^qubits");
  }
  if (!(local_train_walltime >= 0.0)) throw ConfigError("local_train_walltime must be nonnegative");
  if (!(los_retry_interval > 0.0)) throw ConfigError("los_retry_interval must be positive");
  try {
    optimizer.validate();
    s2s.validate();
    s2g.validate();
    g2s.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

vqc::Classifier make_classifier(const SimConfig& config) {
  return vqc::Classifier(config.feature_map, config.ansatz, {config.n_classes, {}});
}

ServerEval server_eval(const vqc::Classifier& clf, std::span<const double> theta, const dataio::Dataset& holdout) {
  if (holdout.size() == 0) throw std::invalid_argument("server_eval: empty holdout");
  return {clf.accuracy(holdout, theta), clf.loss(holdout, theta)};
}

RunResult run_orb_qfl(const SimConfig& cfg, std::span<const dataio::Dataset> shards, const dataio::Dataset& holdout) {
  check_shards(cfg, shards, holdout);
  const auto clf = make_classifier(cfg);
  const auto orbits = orbital::build_constellation(cfg.constellation);
  const auto train = all_training(shards);
  const double payload = vqc::payload_bits(clf.parameter_count());
  const std::size_t n = cfg.n_sats();

  RunResult out;
  out.mode = Mode::orb;
  Clock clock;
  vqc::ParamVector received;
  for (std::size_t r = 0; r < cfg.rounds; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      vqc::FitOptions opt;
      opt.optimizer = cfg.optimizer;
      if (r == 0 && i == 0) {
        opt.seed = substream_seed(cfg.seed, "init");
      } else {
        opt.warm_start = true;
        opt.init = received;
      }
      const auto fit = clf.fit(shards[i], opt);
      out.fit_calls.push_back({r, static_cast<int>(i), opt.warm_start, fit.theta_init});
      received = fit.theta;
      clock.now += cfg.local_train_walltime;

      const std::size_t next = (i + 1) % n;
      transmit(cfg, out.events, clock, static_cast<int>(i), static_cast<int>(next), cfg.s2s, payload,
               [&](double t) {
                 return std::pair{orbital::propagate(orbits[i], t).point(), orbital::propagate(orbits[next], t).point()};
               });
      out.metrics.push_back(device_row(clf, fit, shards[i], holdout, r, static_cast<int>(i), clock));
    }
    out.metrics.push_back(server_row(clf, received, train, holdout, r, clock));
  }
  out.final_theta = received;
  return out;
}

RunResult run_server_qfl(const SimConfig& cfg, std::span<const dataio::Dataset> shards, const dataio::Dataset& holdout) {
  check_shards(cfg, shards, holdout);
  const auto clf = make_classifier(cfg);
  const auto orbits = orbital::build_constellation(cfg.constellation);
  const auto server = orbital::ServerNode::from_config(cfg.constellation);
  const auto train = all_training(shards);
  const double payload = vqc::payload_bits(clf.parameter_count());
  const std::size_t n = cfg.n_sats();

  std::vector<double> weights;
  for (const auto& s : shards) weights.push_back(static_cast<double>(s.size()) / static_cast<double>(train.size()));

  RunResult out;
  out.mode = Mode::server;
  Clock clock;
  vqc::ParamVector global = clf.random_parameters(substream_seed(cfg.seed, "init"));
  for (std::size_t r = 0; r < cfg.rounds; ++r) {
    vqc::FitOptions opt;
    opt.optimizer = cfg.optimizer;
    opt.warm_start = true;
    opt.init = global;

    std::vector<vqc::FitResult> fits;
    if (cfg.parallel_fits) {
      std::vector<std::future<vqc::FitResult>> pending;
      for (std::size_t i = 0; i < n; ++i) {
        pending.push_back(std::async(std::launch::async, [&, i] { return clf.fit(shards[i], opt); }));
      }
      for (auto& f : pending) fits.push_back(f.get());
    } else {
      for (std::size_t i = 0; i < n; ++i) fits.push_back(clf.fit(shards[i], opt));
    }
    // Satellites train concurrently, so one round costs one local fit.
    clock.now += cfg.local_train_walltime;

    std::vector<vqc::ParamVector> local;
    for (std::size_t i = 0; i < n; ++i) {
      out.fit_calls.push_back({r, static_cast<int>(i), true, global});
      transmit(cfg, out.events, clock, static_cast<int>(i), kServerNode, cfg.s2g, payload, [&](double t) {
        return std::pair{orbital::propagate(orbits[i], t).point(), server.position_at(t)};
      });
      out.metrics.push_back(device_row(clf, fits[i], shards[i], holdout, r, static_cast<int>(i), clock));
      local.push_back(fits[i].theta);
    }

    global = fedavg(local, weights);
    for (std::size_t i = 0; i < n; ++i) {
      transmit(cfg, out.events, clock, kServerNode, static_cast<int>(i), cfg.g2s, payload, [&](double t) {
        return std::pair{server.position_at(t), orbital::propagate(orbits[i], t).point()};
      });
    }
    out.metrics.push_back(server_row(clf, global, train, holdout, r, clock));
  }
  out.final_theta = global;
  return out;
}

RunResult run(const SimConfig& config, std::span<const dataio::Dataset> shards, const dataio::Dataset& holdout) {
  return config.mode == Mode::orb ? run_orb_qfl(config, shards, holdout) : run_server_qfl(config, shards, holdout);
}

vqc::ParamVector fedavg(std::span<const vqc::ParamVector> params, std::span<const double> weights) {
  if (params.empty()) throw std::invalid_argument("fedavg: no parameter vectors");
  if (weights.size() != params.size()) throw std::invalid_argument("fedavg: one weight per parameter vector required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("fedavg: weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument(fmt::format("fedavg: weights sum to {}, not 1", total));
  const auto& base = params.front();
  for (const auto& p : params) {
    if (p.size() != base.size()) throw std::invalid_argument("fedavg: parameter vectors differ in length");
  }
  // Accumulated as offsets from the first vector, so equal inputs come back
  // bit-for-bit.
  vqc::ParamVector out = base;
  for (std::size_t k = 0; k < out.size(); ++k) {
    double offset = 0.0;
    for (std::size_t i = 1; i < params.size(); ++i) offset += weights[i] * (params[i][k] - base[k]);
    out[k] += offset;
  }
  return out;
}

BoundConstants BoundConstants::from_config(const Config& cfg) {
  BoundConstants c;
  const std::pair<const char*, double*> scalars[] = {
      {"L", &c.L},         {"mu", &c.mu},           {"N", &c.N},
      {"K", &c.K},         {"R", &c.R},             {"gamma_c", &c.gamma_c},
      {"tau_c", &c.tau_c}, {"delta_c", &c.delta_c}, {"rho_loss", &c.rho_loss},
      {"rho", &c.rho},     {"eps_c", &c.eps_c},     {"B", &c.B},
      {"T", &c.T},         {"alpha_q", &c.alpha_q}, {"sigma_q", &c.sigma_q},
      {"N_q", &c.N_q},     {"theta0_minus_thetastar_sq", &c.theta0_minus_thetastar_sq},
  };
  for (const auto& [key, slot] : scalars) *slot = cfg.get_double(key);
  if (!cfg.contains("delta_schedule")) throw ConfigError("missing required config key 'delta_schedule'");
  c.delta_schedule = cfg.get_doubles("delta_schedule");
  c.validate();
  return c;
}

void BoundConstants::validate() const {
  const std::pair<const char*, double> scalars[] = {
      {"L", L},         {"mu", mu},           {"N", N},
      {"K", K},         {"R", R},             {"gamma_c", gamma_c},
      {"tau_c", tau_c}, {"delta_c", delta_c}, {"rho_loss", rho_loss},
      {"rho", rho},     {"eps_c", eps_c},     {"B", B},
      {"T", T},         {"alpha_q", alpha_q}, {"sigma_q", sigma_q},
      {"N_q", N_q},     {"theta0_minus_thetastar_sq", theta0_minus_thetastar_sq},
  };
  for (const auto& [key, v] : scalars) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigError(fmt::format("bound constant '{}' must be nonnegative, got {}", key, v));
  }
  for (const auto& [key, v] : {std::pair{"N", N}, std::pair{"K", K}, std::pair{"R", R}, std::pair{"N_q", N_q}}) {
    if (v != std::floor(v)) throw ConfigError(fmt::format("bound constant '{}' must be an integer, got {}", key, v));
  }
  for (double d : delta_schedule) {
    if (!std::isfinite(d) || d < 0.0) throw ConfigError(fmt::format("delta_schedule entries must be nonnegative, got {}", d));
  }
}

double BoundConstants::delta(std::size_t t) const {
  if (delta_schedule.empty() || t == 0) return 0.0;
  return delta_schedule[std::min(t, delta_schedule.size()) - 1];
}

double theorem1_bound(const BoundConstants& c, std::size_t r) {
  c.validate();
  const double rr = static_cast<double>(r);
  double path = 0.0;
  for (std::size_t t = 1; t <= r; ++t) path += c.delta(t);
  const double d = c.delta(r);
  const double nk = c.N * c.K;
  return c.L * path + c.mu * c.theta0_minus_thetastar_sq * std::exp(-c.mu * d * rr / 2.0) + ratio(d, nk, "Delta/(NK)") +
         ratio(c.L * d * d, nk, "L Delta^2/(NK)") + c.gamma_c * c.tau_c * rr + c.delta_c * c.rho_loss * c.rho +
         c.eps_c * ratio(c.rho, c.B, "rho/B") * c.T + c.alpha_q * c.sigma_q * c.sigma_q * c.N_q;
}

void write_metrics_csv(std::ostream& out, std::span<const RunResult> runs) {
  out << "mode,round,device,train_acc,test_acc,objective,evals,sim_time_s,bits_cum\n";
  for (const auto& run : runs) {
    for (const auto& m : run.metrics) {
      fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", to_string(run.mode), m.round, node_name(m.device), m.train_accuracy,
                 m.test_accuracy, m.final_objective, m.evals_used, m.cumulative_sim_time, m.cumulative_bits);
    }
  }
}

void write_events_csv(std::ostream& out, std::span<const RunResult> runs) {
  out << "mode,time_s,src,dst,bits,dist_km,delay_s,margin_db,blocked\n";
  for (const auto& run : runs) {
    for (const auto& e : run.events) {
      fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", to_string(run.mode), e.time, node_name(e.src), node_name(e.dst),
                 e.payload_bits, e.distance, e.delay, e.margin, e.blocked ? 1 : 0);
    }
  }
}

void write_bound_csv(std::ostream& out, const BoundConstants& c) {
  out << "round,bound_value\n";
  const auto rounds = static_cast<std::size_t>(c.R);
  for (std::size_t r = 1; r <= rounds; ++r) fmt::print(out, "{},{}\n", r, theorem1_bound(c, r));
}

}  // namespace orbqfl::protocol
