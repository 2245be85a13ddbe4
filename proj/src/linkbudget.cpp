#include "orbqfl/linkbudget.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace orbqfl::linkbudget {

void LinkSpec::validate() const {
  if (!(frequency > 0.0)) throw std::invalid_argument("LinkSpec: frequency must be positive");
  if (!(bitrate > 0.0)) throw std::invalid_argument("LinkSpec: bitrate must be positive");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("LinkSpec: bandwidth must be positive");
}

LinkSpec preset_g2s() {
  LinkSpec s;
  s.name = "G2S";
  return s;
}

LinkSpec preset_s2g() {
  LinkSpec s;
  s.name = "S2G";
  return s;
}

LinkSpec preset_s2s() {
  LinkSpec s;
  s.name = "S2S";
  s.frequency = 2.2e9;
  s.bandwidth = 5.0e6;
  return s;
}

LinkSpec preset(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::toupper(c); });
  if (key == "L1" || key == "G2S") return preset_g2s();
  if (key == "L2" || key == "S2G") return preset_s2g();
  if (key == "L3" || key == "S2S") return preset_s2s();
  throw std::invalid_argument(fmt::format("unknown link preset '{}'", name));
}

double fspl(double distance_km, double frequency_hz) {
  if (!(distance_km > 0.0) || !(frequency_hz > 0.0)) {
    throw std::invalid_argument("fspl: distance and frequency must be positive");
  }
  return 20.0 * std::log10(4.0 * std::numbers::pi * distance_km * 1000.0 * frequency_hz / kSpeedOfLight);
}

LinkBudgetReport link_budget(const LinkSpec& spec, double distance_km) {
  spec.validate();
  LinkBudgetReport r;
  r.fspl = fspl(distance_km, spec.frequency);
  r.eirp = spec.tx_power - spec.tx_obo + spec.tx_gain;
  r.cn0 = r.eirp - r.fspl - spec.misc_losses + spec.rx_g_over_t + kBoltzmannDb;
  r.ebn0 = r.cn0 - 10.0 * std::log10(spec.bitrate);
  r.margin = r.ebn0 - spec.required_ebn0;
  return r;
}

std::vector<std::pair<double, double>> margin_vs_bitrate(const LinkSpec& spec, double distance_km,
                                                         std::span<const double> bitrates) {
  if (bitrates.empty()) throw std::invalid_argument("margin_vs_bitrate: empty bitrate list");
  std::vector<std::pair<double, double>> out;
  out.reserve(bitrates.size());
  LinkSpec s = spec;
  for (double rate : bitrates) {
    s.bitrate = rate;
    out.emplace_back(rate, link_budget(s, distance_km).margin);
  }
  return out;
}

std::vector<std::vector<double>> margin_grid(const LinkSpec& spec, std::span<const double> powers,
                                             std::span<const double> distances) {
  if (powers.empty() || distances.empty()) throw std::invalid_argument("margin_grid: empty axis");
  std::vector<std::vector<double>> grid(powers.size(), std::vector<double>(distances.size()));
  LinkSpec s = spec;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    s.tx_power = powers[i];
    for (std::size_t j = 0; j < distances.size(); ++j) grid[i][j] = link_budget(s, distances[j]).margin;
  }
  return grid;
}

double transmission_delay(double payload_bits, double bitrate, double distance_km) {
  if (!(bitrate > 0.0)) throw std::invalid_argument("transmission_delay: bitrate must be positive");
  if (!(payload_bits >= 0.0) || !(distance_km >= 0.0)) {
    throw std::invalid_argument("transmission_delay: payload and distance must be non-negative");
  }
  return payload_bits / bitrate + distance_km * 1000.0 / kSpeedOfLight;
}

void write_report_csv(std::ostream& out, const LinkSpec& spec, std::span<const double> distances) {
  out << "link_name,distance_km,fspl_db,eirp_dbw,cn0_dbhz,ebn0_db,margin_db\n";
  for (double d : distances) {
    const auto r = link_budget(spec, d);
    fmt::print(out, "{},{},{},{},{},{},{}\n", spec.name, d, r.fspl, r.eirp, r.cn0, r.ebn0, r.margin);
  }
}

void write_grid_csv(std::ostream& out, const LinkSpec& spec, std::span<const double> powers,
                    std::span<const double> distances) {
  const auto grid = margin_grid(spec, powers, distances);
  out << "power_dbw,distance_km,margin_db\n";
  for (std::size_t i = 0; i < powers.size(); ++i) {
    for (std::size_t j = 0; j < distances.size(); ++j) {
      fmt::print(out, "{},{},{}\n", powers[i], distances[j], grid[i][j]);
    }
  }
}

void write_sweep_csv(std::ostream& out, const LinkSpec& spec, double distance_km, std::span<const double> bitrates) {
  const auto sweep = margin_vs_bitrate(spec, distance_km, bitrates);
  out << "bitrate_bps,margin_db\n";
  for (const auto& [rate, margin] : sweep) fmt::print(out, "{},{}\n", rate, margin);
}

}  // namespace orbqfl::linkbudget
