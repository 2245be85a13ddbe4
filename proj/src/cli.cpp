#include "orbqfl/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "orbqfl/config.hpp"
#include "orbqfl/dataio.hpp"
#include "orbqfl/errors.hpp"
#include "orbqfl/linkbudget.hpp"
#include "orbqfl/orbital.hpp"
#include "orbqfl/protocol.hpp"
#include "orbqfl/rng.hpp"

#ifndef ORBQFL_VERSION
#define ORBQFL_VERSION "0.0.0"
#endif

namespace orbqfl::cli {
namespace fs = std::filesystem;

namespace {

struct Key {
  const char* name;
  const char* fallback;  // nullptr: no default, absent unless given
  const char* help;
};

// Every configuration key. Each one is also a flag of the same name.
const Key kKeys[] = {
    {"seed", "0", "root seed for every random stream"},
    {"out", "out", "output directory"},
    // constellation
    {"n_sats", "5", "number of satellites"},
    {"altitude", "500", "orbit altitude, km"},
    {"inclination", "60", "orbit inclination, deg"},
    {"spacing", "in_plane", "satellite spacing: in_plane or raan"},
    {"gs_lat", "0", "ground station latitude, deg"},
    {"gs_lon", "0", "ground station longitude, deg"},
    {"gs_alt", "0", "ground station altitude, km"},
    {"server_alt", "0.02", "server altitude, km (below 100 km: fixed point; otherwise equatorial orbit)"},
    // orbits
    {"duration", "5677", "ephemeris duration, s"},
    {"step", "60", "ephemeris time step, s"},
    // link budget
    {"preset", "L3", "link preset: L1/G2S, L2/S2G, L3/S2S"},
    {"distance", nullptr, "report mode: link distance, km"},
    {"grid_power", nullptr, "grid mode: transmit power axis a:b:n, dBW"},
    {"grid_distance", nullptr, "grid mode: distance axis a:b:n, km"},
    {"sweep", nullptr, "sweep mode: comma-separated bitrates, bit/s"},
    {"sweep_distance", nullptr, "sweep mode: link distance, km"},
    {"frequency", nullptr, "override the preset carrier frequency, Hz"},
    {"bandwidth", nullptr, "override the preset bandwidth, Hz"},
    {"bitrate", nullptr, "override the preset bitrate, bit/s"},
    {"required_ebn0", nullptr, "override the preset required Eb/N0, dB"},
    {"tx_power", nullptr, "override the preset transmit power, dBW"},
    {"tx_obo", nullptr, "override the preset output back-off, dB"},
    {"tx_gain", nullptr, "override the preset transmit antenna gain, dBi"},
    {"rx_g_over_t", nullptr, "override the preset receiver G/T, dB/K"},
    {"misc_losses", nullptr, "override the preset miscellaneous losses, dB"},
    {"s2s_preset", "L3", "preset for satellite-to-satellite links"},
    {"s2g_preset", "L2", "preset for satellite-to-server links"},
    {"g2s_preset", "L1", "preset for server-to-satellite links"},
    // training
    {"mode", "orb", "protocol: orb or server"},
    {"rounds", "5", "communication rounds"},
    {"qubits", "4", "qubits (= reduced feature dimension)"},
    {"fm_reps", "1", "feature map repetitions"},
    {"encoding", "angle", "feature map: angle or zz"},
    {"ansatz_reps", "2", "ansatz repetitions"},
    {"entangle", "ring", "ansatz entanglement: ring or line"},
    {"max_fun", "100", "objective evaluations per local fit"},
    {"rho_begin", "1", "initial trust-region radius"},
    {"rho_end", "1e-4", "final trust-region radius"},
    {"dataset", "synthetic", "synthetic or statlog"},
    {"data_dir", nullptr, "directory holding sat.trn and sat.tst"},
    {"train_fraction", "0.9", "fraction of rows used for training"},
    {"blobs_per_class", "100", "synthetic rows per class"},
    {"blobs_classes", "2", "synthetic class count"},
    {"blobs_separation", "0.5", "synthetic minimum centre distance"},
    {"blobs_spread", "0.05", "synthetic per-feature standard deviation"},
    {"enforce_los", "false", "block transmissions without line of sight"},
    {"los_retry_interval", "60", "wait between visibility samples when blocked, s"},
    {"los_max_retries", "10000", "visibility samples before giving up"},
    {"local_train_walltime", "0", "simulated time per local fit, s"},
    {"parallel_fits", "false", "server mode: fit satellites concurrently"},
    // bound
    {"constants", nullptr, "bound constants file"},
};

const Key* find_key(const std::string& name) {
  for (const auto& k : kKeys) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

std::string hyphenated(std::string s) {
  for (char& c : s) {
    if (c == '_') c = '-';
  }
  return s;
}

fs::path out_dir(const Config& c) { return c.get_string("out"); }

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  f << text;
  if (!f) throw std::runtime_error(fmt::format("failed writing {}", path.string()));
}

// Re-running the same subcommand with --config pointing at this file
// reproduces the run.
void write_manifest(const Config& c, std::string_view command, const std::vector<std::string>& artifacts,
                    const std::vector<std::string>& notes = {}) {
  std::ostringstream s;
  fmt::print(s, "# orbqfl {}\n# command: {}\n", version(), command);
  for (const auto& a : artifacts) fmt::print(s, "# artifact: {}\n", (out_dir(c) / a).string());
  for (const auto& n : notes) fmt::print(s, "# {}\n", n);
  s << c.dump();
  write_text(out_dir(c) / "manifest.cfg", s.str());
}

double require_double(const Config& c, const char* key) {
  if (!c.contains(key)) throw UsageError(fmt::format("--{} is required", key));
  return c.get_double(key);
}

std::vector<double> parse_axis(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw UsageError(fmt::format("--{} expects start:stop:count, got '{}'", key, text));
  double a = 0, b = 0;
  long n = 0;
  try {
    std::size_t used = 0;
    a = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("");
    b = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("");
    n = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw UsageError(fmt::format("--{} expects start:stop:count, got '{}'", key, text));
  }
  if (n < 1) throw UsageError(fmt::format("--{} needs a positive count", key));
  std::vector<double> axis;
  for (long i = 0; i < n; ++i) axis.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return axis;
}

template <typename T>
T as_count(const Config& c, const char* key) {
  const auto v = c.get_int(key);
  if (v < 0) throw ConfigError(fmt::format("config key '{}' must be nonnegative", key));
  return static_cast<T>(v);
}

orbital::ConstellationConfig constellation(const Config& c) {
  orbital::ConstellationConfig k;
  k.n_sats = as_count<std::size_t>(c, "n_sats");
  k.altitude = c.get_double("altitude");
  k.inclination = c.get_double("inclination");
  const auto spacing = c.get_string("spacing");
  if (spacing == "in_plane") {
    k.spacing_mode = orbital::SpacingMode::in_plane_spaced;
  } else if (spacing == "raan") {
    k.spacing_mode = orbital::SpacingMode::raan_spaced;
  } else {
    throw ConfigError(fmt::format("config key 'spacing' must be in_plane or raan, got '{}'", spacing));
  }
  k.ground_station = {c.get_double("gs_lat"), c.get_double("gs_lon"), c.get_double("gs_alt")};
  k.geo_server_altitude = c.get_double("server_alt");
  return k;
}

linkbudget::LinkSpec link_preset(const Config& c, const char* key) {
  try {
    return linkbudget::preset(c.get_string(key));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("config key '{}': {}", key, e.what()));
  }
}

linkbudget::LinkSpec custom_link(const Config& c) {
  auto spec = link_preset(c, "preset");
  const std::pair<const char*, double*> fields[] = {
      {"frequency", &spec.frequency}, {"bandwidth", &spec.bandwidth}, {"bitrate", &spec.bitrate},
      {"required_ebn0", &spec.required_ebn0}, {"tx_power", &spec.tx_power}, {"tx_obo", &spec.tx_obo},
      {"tx_gain", &spec.tx_gain}, {"rx_g_over_t", &spec.rx_g_over_t}, {"misc_losses", &spec.misc_losses},
  };
  for (const auto& [key, slot] : fields) {
    if (c.contains(key)) *slot = c.get_double(key);
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

int cmd_orbits(const Config& c, std::ostream& out) {
  const double duration = c.get_double("duration");
  const double step = c.get_double("step");
  if (!(step > 0.0)) throw UsageError("--step must be positive");
  if (!(duration >= 0.0)) throw UsageError("--duration must be nonnegative");
  const auto orbits = orbital::build_constellation(constellation(c));

  const auto n_steps = static_cast<std::size_t>(std::floor(duration / step + 1e-9));
  std::vector<double> times;
  for (std::size_t k = 0; k <= n_steps; ++k) times.push_back(static_cast<double>(k) * step);

  write_manifest(c, "orbits", {"ephemeris.csv", "distances.csv"});
  std::ostringstream eph, dist;
  orbital::write_ephemeris_csv(eph, orbits, times);
  orbital::write_distance_csv(dist, orbits, times);
  write_text(out_dir(c) / "ephemeris.csv", eph.str());
  write_text(out_dir(c) / "distances.csv", dist.str());
  fmt::print(out, "{} satellites, {} time steps, period {} s\n", orbits.size(), times.size(), orbits.front().period());
  fmt::print(out, "wrote {}\n", (out_dir(c) / "ephemeris.csv").string());
  fmt::print(out, "wrote {}\n", (out_dir(c) / "distances.csv").string());
  return kExitOk;
}

int cmd_linkbudget(const Config& c, std::ostream& out) {
  const bool report = c.contains("distance");
  const bool grid = c.contains("grid_power") || c.contains("grid_distance");
  const bool sweep = c.contains("sweep");
  const int modes = int{report} + int{grid} + int{sweep};
  if (modes == 0) throw UsageError("choose one output mode: --distance, --grid_power with --grid_distance, or --sweep");
  if (modes > 1) throw UsageError("--distance, --grid_power/--grid_distance and --sweep are mutually exclusive");

  const auto spec = custom_link(c);
  if (report) {
    const double d = c.get_double("distance");
    if (!(d > 0.0)) throw UsageError("--distance must be positive");
    const auto r = linkbudget::link_budget(spec, d);
    write_manifest(c, "linkbudget", {"linkbudget_report.csv"});
    std::ostringstream csv;
    const double ds[] = {d};
    linkbudget::write_report_csv(csv, spec, ds);
    write_text(out_dir(c) / "linkbudget_report.csv", csv.str());
    fmt::print(out, "link          {}\n", spec.name);
    fmt::print(out, "distance_km   {}\n", d);
    fmt::print(out, "fspl_db       {:.4f}\n", r.fspl);
    fmt::print(out, "eirp_dbw      {:.4f}\n", r.eirp);
    fmt::print(out, "cn0_dbhz      {:.4f}\n", r.cn0);
    fmt::print(out, "ebn0_db       {:.4f}\n", r.ebn0);
    fmt::print(out, "margin_db     {:.4f}\n", r.margin);
    return kExitOk;
  }
  if (grid) {
    if (!c.contains("grid_power") || !c.contains("grid_distance")) {
      throw UsageError("grid mode needs both --grid_power and --grid_distance");
    }
    const auto powers = parse_axis("grid_power", c.get_string("grid_power"));
    const auto dists = parse_axis("grid_distance", c.get_string("grid_distance"));
    for (double d : dists) {
      if (!(d > 0.0)) throw UsageError("--grid_distance values must be positive");
    }
    write_manifest(c, "linkbudget", {"linkbudget_grid.csv"});
    std::ostringstream csv;
    linkbudget::write_grid_csv(csv, spec, powers, dists);
    write_text(out_dir(c) / "linkbudget_grid.csv", csv.str());
    fmt::print(out, "{} x {} grid written to {}\n", powers.size(), dists.size(), (out_dir(c) / "linkbudget_grid.csv").string());
    return kExitOk;
  }
  const double d = require_double(c, "sweep_distance");
  if (!(d > 0.0)) throw UsageError("--sweep_distance must be positive");
  const auto rates = c.get_doubles("sweep");
  if (rates.empty()) throw UsageError("--sweep needs at least one bitrate");
  for (double r : rates) {
    if (!(r > 0.0)) throw UsageError("--sweep bitrates must be positive");
  }
  write_manifest(c, "linkbudget", {"linkbudget_sweep.csv"});
  std::ostringstream csv;
  linkbudget::write_sweep_csv(csv, spec, d, rates);
  write_text(out_dir(c) / "linkbudget_sweep.csv", csv.str());
  fmt::print(out, "{} bitrates written to {}\n", rates.size(), (out_dir(c) / "linkbudget_sweep.csv").string());
  return kExitOk;
}

struct Prepared {
  std::vector<dataio::Dataset> shards;
  dataio::Dataset holdout;
  std::uint64_t shard_hash = 0;
  std::size_t n_classes = 0;
};

protocol::SimConfig sim_config(const Config& c) {
  protocol::SimConfig s;
  s.mode = protocol::parse_mode(c.get_string("mode"));
  s.rounds = as_count<std::size_t>(c, "rounds");
  s.constellation = constellation(c);
  s.s2s = link_preset(c, "s2s_preset");
  s.s2g = link_preset(c, "s2g_preset");
  s.g2s = link_preset(c, "g2s_preset");
  s.seed = c.get_u64("seed");
  const auto q = as_count<std::size_t>(c, "qubits");
  if (q < 1 || q > qsim::kMaxQubits) throw ConfigError(fmt::format("config key 'qubits' must be in [1, {}]", qsim::kMaxQubits));
  const auto encoding = c.get_string("encoding");
  if (encoding != "angle" && encoding != "zz") throw ConfigError("config key 'encoding' must be angle or zz");
  const auto entangle = c.get_string("entangle");
  if (entangle != "ring" && entangle != "line") throw ConfigError("config key 'entangle' must be ring or line");
  s.feature_map = {q, as_count<std::size_t>(c, "fm_reps"), encoding == "zz" ? vqc::Encoding::zz : vqc::Encoding::angle};
  s.ansatz = {q, as_count<std::size_t>(c, "ansatz_reps"), entangle == "line" ? vqc::Entangle::line : vqc::Entangle::ring};
  s.optimizer.max_fun = as_count<std::size_t>(c, "max_fun");
  s.optimizer.rho_begin = c.get_double("rho_begin");
  s.optimizer.rho_end = c.get_double("rho_end");
  s.enforce_line_of_sight = c.get_bool("enforce_los", false);
  s.los_retry_interval = c.get_double("los_retry_interval");
  s.los_max_retries = as_count<std::size_t>(c, "los_max_retries");
  s.local_train_walltime = c.get_double("local_train_walltime");
  s.parallel_fits = c.get_bool("parallel_fits", false);
  return s;
}

Prepared prepare_data(const Config& c, const protocol::SimConfig& sim) {
  const std::uint64_t seed = sim.seed;
  const double fraction = c.get_double("train_fraction");
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("config key 'train_fraction' must be in (0, 1)");
  const std::size_t q = sim.feature_map.n_qubits;
  const auto dataset = c.get_string("dataset");

  dataio::Dataset train, test;
  if (dataset == "synthetic") {
    const auto data = dataio::synthetic_blobs(as_count<std::size_t>(c, "blobs_per_class"),
                                              as_count<std::size_t>(c, "blobs_classes"), q,
                                              c.get_double("blobs_separation"), substream_seed(seed, "data"),
                                              c.get_double("blobs_spread"));
    std::tie(train, test) = dataio::split(data, fraction, substream_seed(seed, "split"));
  } else if (dataset == "statlog") {
    if (!c.contains("data_dir")) {
      throw DataError(
          "dataset = statlog needs --data_dir pointing at a directory with sat.trn and sat.tst "
          "(UCI Statlog Landsat Satellite data)");
    }
    const auto data = dataio::load_statlog_dir(c.get_string("data_dir"));
    if (q > data.dimension()) throw ConfigError("config key 'qubits' exceeds the feature dimension");
    auto [tr, te] = dataio::split(data, fraction, substream_seed(seed, "split"));
    // Scaling and projection are fitted on the training rows only.
    const auto scaler = dataio::MinMaxScaler::fit(tr.features);
    const auto model = dataio::pca_fit(scaler.transform(tr.features), q);
    tr.features = dataio::pca_transform(model, scaler.transform(tr.features));
    te.features = dataio::pca_transform(model, scaler.transform(te.features));
    train = std::move(tr);
    test = std::move(te);
  } else {
    throw ConfigError(fmt::format("config key 'dataset' must be synthetic or statlog, got '{}'", dataset));
  }
  if (train.size() < sim.n_sats()) {
    throw DataError(fmt::format("{} training rows cannot be shared among {} satellites", train.size(), sim.n_sats()));
  }
  if (test.size() == 0) throw DataError("the test split is empty; lower train_fraction or add data");

  Prepared p;
  const auto plan = dataio::partition(train.size(), sim.n_sats(), substream_seed(seed, "shards"));
  p.shards = dataio::apply_plan(train, plan);
  p.holdout = std::move(test);
  p.shard_hash = plan.hash();
  p.n_classes = train.n_classes();
  return p;
}

const protocol::RoundMetrics& last_server_row(const protocol::RunResult& r) {
  for (auto it = r.metrics.rbegin(); it != r.metrics.rend(); ++it) {
    if (it->device == protocol::kServerNode) return *it;
  }
  throw std::logic_error("run produced no evaluation rows");
}

void summarize(std::ostream& out, const protocol::RunResult& r) {
  const auto& m = last_server_row(r);
  fmt::print(out, "{}: {} rounds, final test accuracy {:.4f}, objective {:.6f}, {} events, sim time {:.6f} s, {} bits\n",
             protocol::to_string(r.mode), m.round + 1, m.test_accuracy, m.final_objective, r.events.size(),
             m.cumulative_sim_time, m.cumulative_bits);
}

std::string hash_hex(std::uint64_t h) { return fmt::format("{:016x}", h); }

int cmd_train(const Config& c, std::ostream& out) {
  auto sim = sim_config(c);
  const auto data = prepare_data(c, sim);
  sim.n_classes = data.n_classes;
  sim.validate();

  write_manifest(c, "train", {"metrics.csv", "events.csv"}, {"shard_hash: " + hash_hex(data.shard_hash)});
  fmt::print(out, "shard hash {}\n", hash_hex(data.shard_hash));
  const std::vector<protocol::RunResult> runs{protocol::run(sim, data.shards, data.holdout)};
  std::ostringstream metrics, events;
  protocol::write_metrics_csv(metrics, runs);
  protocol::write_events_csv(events, runs);
  write_text(out_dir(c) / "metrics.csv", metrics.str());
  write_text(out_dir(c) / "events.csv", events.str());
  summarize(out, runs.front());
  return kExitOk;
}

int cmd_compare(const Config& c, std::ostream& out) {
  auto base = sim_config(c);
  std::vector<protocol::RunResult> runs;
  std::vector<std::string> notes;
  std::vector<std::pair<protocol::SimConfig, Prepared>> jobs;
  // Each mode prepares its own copy of the data from the shared seed; equal
  // hashes show that both saw identical shards.
  for (auto mode : {protocol::Mode::orb, protocol::Mode::server}) {
    auto sim = base;
    sim.mode = mode;
    auto data = prepare_data(c, sim);
    sim.n_classes = data.n_classes;
    sim.validate();
    notes.push_back(fmt::format("shard_hash {}: {}", protocol::to_string(mode), hash_hex(data.shard_hash)));
    jobs.emplace_back(sim, std::move(data));
  }
  write_manifest(c, "compare", {"metrics.csv", "events.csv"}, notes);
  for (const auto& n : notes) fmt::print(out, "{}\n", n);
  for (const auto& [sim, data] : jobs) runs.push_back(protocol::run(sim, data.shards, data.holdout));

  std::ostringstream metrics, events;
  protocol::write_metrics_csv(metrics, runs);
  protocol::write_events_csv(events, runs);
  write_text(out_dir(c) / "metrics.csv", metrics.str());
  write_text(out_dir(c) / "events.csv", events.str());
  for (const auto& r : runs) summarize(out, r);
  return kExitOk;
}

int cmd_bound(const Config& c, std::ostream& out) {
  if (!c.contains("constants")) throw UsageError("--constants FILE is required");
  const auto constants = protocol::BoundConstants::from_config(Config::load(c.get_string("constants")));
  write_manifest(c, "bound", {"bound.csv"});
  std::ostringstream csv;
  protocol::write_bound_csv(csv, constants);
  write_text(out_dir(c) / "bound.csv", csv.str());
  fmt::print(out, "{} rounds written to {}\n", static_cast<std::size_t>(constants.R), (out_dir(c) / "bound.csv").string());
  return kExitOk;
}

}  // namespace

std::string_view version() { return ORBQFL_VERSION; }

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Satellite federated quantum learning simulator", "orbqfl"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1, 1);

  std::string config_path;
  app.add_option("--config", config_path, "flat key = value configuration file");

  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;
  for (const auto& k : kKeys) {
    std::string names = fmt::format("--{}", k.name);
    if (hyphenated(k.name) != k.name) names += fmt::format(",--{}", hyphenated(k.name));
    auto* opt = app.add_option(names, flag_values[k.name], k.help);
    if (k.fallback) opt->option_text(fmt::format("(default {})", k.fallback));
    flag_options[k.name] = opt;
  }

  const std::map<std::string, std::string> commands = {
      {"orbits", "propagate the constellation and write ephemeris and pairwise distances"},
      {"linkbudget", "evaluate a link budget at one distance, over a power x distance grid, or a bitrate sweep"},
      {"train", "run one federated training protocol"},
      {"compare", "run both protocols on identical shards and merge their metrics"},
      {"bound", "evaluate the convergence bound for every round"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    Config resolved;
    for (const auto& k : kKeys) {
      if (k.fallback) resolved.set(k.name, k.fallback);
    }
    if (!config_path.empty()) {
      const auto file = Config::load(config_path);
      for (const auto& [key, value] : file.entries()) {
        if (!find_key(key)) throw ConfigError(fmt::format("unknown config key '{}' in {}", key, config_path));
      }
      resolved.merge(file);
    }
    for (const auto& [name, opt] : flag_options) {
      if (opt->count() > 0) resolved.set(name, flag_values[name]);
    }

    if (command == "orbits") return cmd_orbits(resolved, out);
    if (command == "linkbudget") return cmd_linkbudget(resolved, out);
    if (command == "train") return cmd_train(resolved, out);
    if (command == "compare") return cmd_compare(resolved, out);
    return cmd_bound(resolved, out);
  } catch (const UsageError& e) {
    fmt::print(err, "usage error: {}\nRun with --help for more information.\n", e.what());
    return kExitUsage;
  } catch (const DataError& e) {
    fmt::print(err, "data error: {}\n", e.what());
    return kExitData;
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitFailure;
  }
}

}  // namespace orbqfl::cli
