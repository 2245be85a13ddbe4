#pragma once

// Circular Keplerian two-body propagation for a ring constellation, plus the
// ground/server nodes it talks to. Spherical Earth, no perturbations.
//
// Units: km, s, degrees at the API boundary; radians internally.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace orbqfl::orbital {

inline constexpr double kMuEarth = 398600.4418;          // km^3/s^2
inline constexpr double kEarthRadius = 6378.137;         // km
inline constexpr double kEarthRotationRate = 7.2921159e-5;  // rad/s
inline constexpr double kGeoAltitude = 35786.0;          // km

/// Below this altitude a server is treated as a fixed ECI point, not an orbit.
inline constexpr double kFixedServerAltitudeLimit = 100.0;  // km

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  bool operator==(const Vec3&) const = default;
};

struct OrbitSpec {
  double semi_major_axis = kEarthRadius + 500.0;  // km
  double eccentricity = 0.0;                      // only 0 is supported
  double inclination = 0.0;                       // deg
  double raan = 0.0;                              // deg
  double arg_latitude_epoch = 0.0;                // deg, in-plane phase at epoch
  double epoch = 0.0;                             // s

  double mean_motion() const { return std::sqrt(kMuEarth / std::pow(semi_major_axis, 3)); }
  double period() const;
  /// Throws std::invalid_argument if any invariant is violated.
  void validate() const;
};

enum class SpacingMode { raan_spaced, in_plane_spaced };

struct GeodeticPoint {
  double lat = 0.0;  // deg
  double lon = 0.0;  // deg
  double alt = 0.0;  // km
};

struct ConstellationConfig {
  std::size_t n_sats = 5;
  double altitude = 500.0;     // km
  double inclination = 60.0;   // deg
  SpacingMode spacing_mode = SpacingMode::in_plane_spaced;
  GeodeticPoint ground_station{};
  std::optional<double> geo_server_altitude;  // km
};

/// Position of a node at a simulation time.
struct EciPoint {
  Vec3 position;
  double time = 0.0;
};

struct SatelliteState {
  std::size_t sat_id = 0;
  Vec3 position;  // km
  Vec3 velocity;  // km/s
  double time = 0.0;

  EciPoint point() const { return {position, time}; }
};

template <typename T>
concept Located = requires(const T& t) {
  { t.position } -> std::convertible_to<Vec3>;
  { t.time } -> std::convertible_to<double>;
};

/// Normalizes an angle in degrees into [0, 360).
double wrap_degrees(double deg);

/// One orbit per satellite at R_E + altitude, phased 360/n apart either in
/// RAAN or in argument of latitude. Throws ConfigError when n_sats < 2.
std::vector<OrbitSpec> build_constellation(const ConstellationConfig& config);

SatelliteState propagate(const OrbitSpec& orbit, double t, std::size_t sat_id = 0);

/// Euclidean separation in km. Throws std::invalid_argument when the two
/// samples were taken at different times.
double distance(const EciPoint& a, const EciPoint& b);

template <Located A, Located B>
double distance(const A& a, const B& b) {
  return distance(EciPoint{a.position, a.time}, EciPoint{b.position, b.time});
}

/// Earth-fixed site rotated into ECI by t seconds of Earth rotation.
EciPoint ground_station_eci(const GeodeticPoint& site, double t);

/// True iff the segment a-b stays farther than R_E + grazing_margin from the
/// Earth's centre. Throws when either endpoint lies inside the Earth.
bool line_of_sight(const Vec3& a, const Vec3& b, double grazing_margin = 0.0);

// A communication endpoint that is not part of the ring: a fixed point for a
// quasi-ground station, or an equatorial circular orbit for a true GEO node.
class ServerNode {
 public:
  /// Fixed point above the ground station when altitude is below
  /// kFixedServerAltitudeLimit, otherwise an equatorial orbit at that altitude
  /// phased to the station's longitude.
  static ServerNode from_config(const ConstellationConfig& config);

  EciPoint position_at(double t) const;
  bool is_orbiting() const { return orbit_.has_value(); }

 private:
  Vec3 fixed_{};
  std::optional<OrbitSpec> orbit_;
};

/// CSV: time_s,sat_id,x_km,y_km,z_km
void write_ephemeris_csv(std::ostream& out, std::span<const OrbitSpec> orbits,
                         std::span<const double> times);
/// CSV: time_s,sat_i,sat_j,dist_km for every i < j
void write_distance_csv(std::ostream& out, std::span<const OrbitSpec> orbits,
                        std::span<const double> times);

}  // namespace orbqfl::orbital
