#include "orbqfl/orbital.hpp"

#include <algorithm>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "orbqfl/errors.hpp"

namespace orbqfl::orbital {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

double wrap_degrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  if (w >= 360.0) w = 0.0;  // fmod of a tiny negative can round up to 360
  return w;
}

double OrbitSpec::period() const {
  return 2.0 * std::numbers::pi * std::sqrt(std::pow(semi_major_axis, 3) / kMuEarth);
}

void OrbitSpec::validate() const {
  if (eccentricity != 0.0) throw std::invalid_argument("OrbitSpec: only circular orbits (e = 0) are supported");
  if (!(semi_major_axis > kEarthRadius)) throw std::invalid_argument("OrbitSpec: semi-major axis must exceed Earth radius");
  for (double angle : {inclination, raan, arg_latitude_epoch}) {
    if (!(angle >= 0.0 && angle < 360.0)) throw std::invalid_argument("OrbitSpec: angles must lie in [0, 360)");
  }
}

std::vector<OrbitSpec> build_constellation(const ConstellationConfig& config) {
  if (config.n_sats < 2) {
    throw ConfigError(fmt::format("constellation needs at least 2 satellites, got {}", config.n_sats));
  }
  if (!(config.altitude > 0.0)) throw ConfigError("constellation altitude must be positive");
  const double spacing = 360.0 / static_cast<double>(config.n_sats);
  std::vector<OrbitSpec> orbits;
  orbits.reserve(config.n_sats);
  for (std::size_t i = 0; i < config.n_sats; ++i) {
    OrbitSpec o;
    o.semi_major_axis = kEarthRadius + config.altitude;
    o.inclination = wrap_degrees(config.inclination);
    const double phase = wrap_degrees(spacing * static_cast<double>(i));
    if (config.spacing_mode == SpacingMode::raan_spaced) {
      o.raan = phase;
    } else {
      o.arg_latitude_epoch = phase;
    }
    o.validate();
    orbits.push_back(o);
  }
  return orbits;
}

SatelliteState propagate(const OrbitSpec& orbit, double t, std::size_t sat_id) {
  const double a = orbit.semi_major_axis;
  const double n = orbit.mean_motion();
  // Reduce elapsed time modulo the period first so that large t keeps the
  // phase accurate.
  const double elapsed = std::fmod(t - orbit.epoch, orbit.period());
  const double u = orbit.arg_latitude_epoch * kDeg + n * elapsed;
  const double inc = orbit.inclination * kDeg;
  const double raan = orbit.raan * kDeg;

  const double cu = std::cos(u), su = std::sin(u);
  const double ci = std::cos(inc), si = std::sin(inc);
  const double co = std::cos(raan), so = std::sin(raan);
  const double v = std::sqrt(kMuEarth / a);

  SatelliteState s;
  s.sat_id = sat_id;
  s.time = t;
  s.position = Vec3{co * cu - so * su * ci, so * cu + co * su * ci, su * si} * a;
  s.velocity = Vec3{-co * su - so * cu * ci, -so * su + co * cu * ci, cu * si} * v;
  return s;
}

double distance(const EciPoint& a, const EciPoint& b) {
  if (std::abs(a.time - b.time) > 1e-9) {
    throw std::invalid_argument(fmt::format("distance: timestamps differ ({} s vs {} s)", a.time, b.time));
  }
  // Component-wise |a - b| is symmetric bit-for-bit.
  return (a.position - b.position).norm();
}

EciPoint ground_station_eci(const GeodeticPoint& site, double t) {
  if (!(std::abs(site.lat) <= 90.0)) throw std::invalid_argument("ground_station_eci: |lat| must be <= 90 deg");
  const double r = kEarthRadius + site.alt;
  const double lat = site.lat * kDeg;
  const double lon = site.lon * kDeg + kEarthRotationRate * t;
  const double cl = std::cos(lat);
  return {Vec3{r * cl * std::cos(lon), r * cl * std::sin(lon), r * std::sin(lat)}, t};
}

bool line_of_sight(const Vec3& a, const Vec3& b, double grazing_margin) {
  if (a.norm() < kEarthRadius || b.norm() < kEarthRadius) {
    throw std::invalid_argument("line_of_sight: endpoint lies inside the Earth");
  }
  // Canonical endpoint order makes the test exactly symmetric.
  const bool swap = std::tie(b.x, b.y, b.z) < std::tie(a.x, a.y, a.z);
  const Vec3& p = swap ? b : a;
  const Vec3& q = swap ? a : b;

  const Vec3 d = q - p;
  const double len2 = d.dot(d);
  double s = 0.0;
  if (len2 > 0.0) s = std::clamp(-p.dot(d) / len2, 0.0, 1.0);
  const Vec3 closest = p + d * s;
  return closest.norm() > kEarthRadius + grazing_margin;
}

ServerNode ServerNode::from_config(const ConstellationConfig& config) {
  ServerNode node;
  const double alt = config.geo_server_altitude.value_or(config.ground_station.alt);
  if (alt < kFixedServerAltitudeLimit) {
    GeodeticPoint site = config.ground_station;
    site.alt = alt;
    node.fixed_ = ground_station_eci(site, 0.0).position;
  } else {
    OrbitSpec geo;
    geo.semi_major_axis = kEarthRadius + alt;
    geo.arg_latitude_epoch = wrap_degrees(config.ground_station.lon);
    geo.validate();
    node.orbit_ = geo;
  }
  return node;
}

EciPoint ServerNode::position_at(double t) const {
  if (orbit_) return propagate(*orbit_, t).point();
  return {fixed_, t};
}

void write_ephemeris_csv(std::ostream& out, std::span<const OrbitSpec> orbits, std::span<const double> times) {
  out << "time_s,sat_id,x_km,y_km,z_km\n";
  for (double t : times) {
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      const auto s = propagate(orbits[i], t, i);
      fmt::print(out, "{},{},{},{},{}\n", t, i, s.position.x, s.position.y, s.position.z);
    }
  }
}

void write_distance_csv(std::ostream& out, std::span<const OrbitSpec> orbits, std::span<const double> times) {
  out << "time_s,sat_i,sat_j,dist_km\n";
  for (double t : times) {
    std::vector<SatelliteState> states;
    states.reserve(orbits.size());
    for (std::size_t i = 0; i < orbits.size(); ++i) states.push_back(propagate(orbits[i], t, i));
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = i + 1; j < states.size(); ++j) {
        fmt::print(out, "{},{},{},{}\n", t, i, j, distance(states[i], states[j]));
      }
    }
  }
}

}  // namespace orbqfl::orbital
