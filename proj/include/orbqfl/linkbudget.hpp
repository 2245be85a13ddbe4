#pragma once

// RF link budget chain: FSPL -> EIRP -> C/N0 -> Eb/N0 -> margin, plus the
// serialization + propagation delay model used when a model is handed on.
// All quantities in dB unless the name says otherwise.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace orbqfl::linkbudget {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
/// -10 log10(k_B), Boltzmann's constant in dBW/(K Hz).
inline constexpr double kBoltzmannDb = 228.601;

struct LinkSpec {
  std::string name = "custom";
  double frequency = 2.0e9;     // Hz
  double bandwidth = 6.0e6;     // Hz; carried for completeness, unused by the Eb/N0 chain
  double bitrate = 10.0e6;      // bit/s
  double required_ebn0 = 10.0;  // dB
  double tx_power = 17.0;       // dBW
  double tx_obo = 6.0;          // dB
  double tx_gain = 60.0;        // dBi
  double rx_g_over_t = 10.0;    // dB/K
  double misc_losses = 0.0;     // dB

  void validate() const;
};

struct LinkBudgetReport {
  double fspl = 0.0;    // dB
  double eirp = 0.0;    // dBW
  double cn0 = 0.0;     // dB-Hz
  double ebn0 = 0.0;    // dB
  double margin = 0.0;  // dB
};

/// Ground station -> satellite (L1).
LinkSpec preset_g2s();
/// Satellite -> ground station (L2).
LinkSpec preset_s2g();
/// Satellite <-> satellite (L3).
LinkSpec preset_s2s();
/// Looks up "L1"/"G2S", "L2"/"S2G" or "L3"/"S2S" (case-insensitive).
LinkSpec preset(std::string_view name);

double fspl(double distance_km, double frequency_hz);

LinkBudgetReport link_budget(const LinkSpec& spec, double distance_km);

std::vector<std::pair<double, double>> margin_vs_bitrate(const LinkSpec& spec, double distance_km,
                                                         std::span<const double> bitrates);

/// grid[i][j] = margin at powers[i] dBW and distances[j] km.
std::vector<std::vector<double>> margin_grid(const LinkSpec& spec, std::span<const double> powers,
                                             std::span<const double> distances);

/// Serialization time plus light-time over the distance, in seconds.
/// Payload and distance may be zero; the bitrate must be positive.
double transmission_delay(double payload_bits, double bitrate, double distance_km);

/// CSV: link_name,distance_km,fspl_db,eirp_dbw,cn0_dbhz,ebn0_db,margin_db
void write_report_csv(std::ostream& out, const LinkSpec& spec, std::span<const double> distances);
/// CSV: power_dbw,distance_km,margin_db (long form)
void write_grid_csv(std::ostream& out, const LinkSpec& spec, std::span<const double> powers,
                    std::span<const double> distances);
/// CSV: bitrate_bps,margin_db
void write_sweep_csv(std::ostream& out, const LinkSpec& spec, double distance_km,
                     std::span<const double> bitrates);

}  // namespace orbqfl::linkbudget
