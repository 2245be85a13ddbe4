#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "orbqfl/errors.hpp"
#include "orbqfl/orbital.hpp"

using namespace orbqfl;
using namespace orbqfl::orbital;

namespace {

constexpr double kA500 = kEarthRadius + 500.0;

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("constellation layout") {
  ConstellationConfig cfg;
  cfg.n_sats = 5;
  auto orbits = build_constellation(cfg);
  REQUIRE(orbits.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(orbits[i].arg_latitude_epoch == doctest::Approx(72.0 * i));
    CHECK(orbits[i].raan == doctest::Approx(0.0));
    CHECK(orbits[i].semi_major_axis == doctest::Approx(kA500));
  }

  cfg.n_sats = 10;
  cfg.spacing_mode = SpacingMode::raan_spaced;
  orbits = build_constellation(cfg);
  for (std::size_t i = 0; i < 10; ++i) CHECK(orbits[i].raan == doctest::Approx(36.0 * i));

  cfg.n_sats = 1;
  CHECK_THROWS_AS(build_constellation(cfg), ConfigError);
}

TEST_CASE("period and periodicity") {
  OrbitSpec o;
  o.semi_major_axis = kA500;
  o.inclination = 53.0;
  o.raan = 20.0;
  o.arg_latitude_epoch = 40.0;
  const double T = 2.0 * std::numbers::pi * std::sqrt(kA500 * kA500 * kA500 / kMuEarth);
  CHECK(o.period() == doctest::Approx(T).epsilon(1e-12));
  CHECK(std::abs(o.period() - 5677.0) < 1.0);

  const auto s0 = propagate(o, 0.0);
  const auto s1 = propagate(o, o.period());
  CHECK((s1.position - s0.position).norm() < 1e-6);
  CHECK(s0.position.norm() == doctest::Approx(kA500));
  // circular speed and velocity perpendicular to radius
  CHECK(s0.velocity.norm() == doctest::Approx(std::sqrt(kMuEarth / kA500)));
  CHECK(std::abs(s0.velocity.dot(s0.position)) < 1e-6);
}

TEST_CASE("propagation matches the textbook rotation sequence") {
  OrbitSpec o;
  o.semi_major_axis = 7000.0;
  o.inclination = 30.0;
  o.raan = 45.0;
  o.arg_latitude_epoch = 10.0;
  const double t = 1234.5;
  const double u = deg2rad(10.0) + o.mean_motion() * t;
  const double W = deg2rad(45.0), i = deg2rad(30.0);
  const Vec3 expect{7000.0 * (std::cos(W) * std::cos(u) - std::sin(W) * std::sin(u) * std::cos(i)),
                    7000.0 * (std::sin(W) * std::cos(u) + std::cos(W) * std::sin(u) * std::cos(i)),
                    7000.0 * std::sin(u) * std::sin(i)};
  CHECK((propagate(o, t).position - expect).norm() < 1e-8);
}

TEST_CASE("distances between sats") {
  OrbitSpec a, b, c;
  a.semi_major_axis = b.semi_major_axis = c.semi_major_axis = kA500;
  b.arg_latitude_epoch = 72.0;
  c.arg_latitude_epoch = 180.0;
  const auto sa = propagate(a, 100.0), sb = propagate(b, 100.0), sc = propagate(c, 100.0);
  CHECK(distance(sa, sa) == 0.0);
  CHECK(distance(sa, sb) == doctest::Approx(2.0 * kA500 * std::sin(deg2rad(36.0))));
  CHECK(distance(sa, sb) == doctest::Approx(8086.0).epsilon(1e-4));
  CHECK(distance(sa, sc) == doctest::Approx(13756.274));
  CHECK_THROWS_AS(distance(sa, propagate(b, 101.0)), std::invalid_argument);
}

TEST_CASE("ground station") {
  auto g = ground_station_eci({0.0, 0.0, 0.0}, 0.0);
  CHECK(g.position.x == doctest::Approx(kEarthRadius));
  CHECK(std::abs(g.position.y) < 1e-9);
  CHECK(std::abs(g.position.z) < 1e-9);

  for (double t : {0.0, 1000.0, 50000.0}) {
    auto p = ground_station_eci({90.0, 33.0, 0.0}, t);
    CHECK(std::abs(p.position.x) < 1e-9);
    CHECK(std::abs(p.position.y) < 1e-9);
    CHECK(p.position.z == doctest::Approx(kEarthRadius));
  }

  const double quarter = 2.0 * std::numbers::pi / kEarthRotationRate / 4.0;
  auto q = ground_station_eci({0.0, 0.0, 0.0}, quarter);
  CHECK(std::abs(q.position.x) < 1e-6);
  CHECK(q.position.y == doctest::Approx(kEarthRadius));
}

TEST_CASE("line of sight") {
  const Vec3 p{kA500, 0.0, 0.0};
  CHECK_FALSE(line_of_sight(p, p * -1.0));
  const Vec3 q{kA500 * std::cos(deg2rad(72.0)), kA500 * std::sin(deg2rad(72.0)), 0.0};
  CHECK(kA500 * std::cos(deg2rad(36.0)) < kEarthRadius);
  CHECK_FALSE(line_of_sight(p, q));
  CHECK(line_of_sight(p, p));
  const Vec3 r{kA500 * std::cos(deg2rad(20.0)), kA500 * std::sin(deg2rad(20.0)), 0.0};
  CHECK(line_of_sight(p, r));
  CHECK(line_of_sight(p, q) == line_of_sight(q, p));
  CHECK(line_of_sight(p, r) == line_of_sight(r, p));
  // a margin large enough to cover the closest approach blocks the link
  const double closest = kA500 * std::cos(deg2rad(10.0));
  CHECK_FALSE(line_of_sight(p, r, closest - kEarthRadius + 1.0));
}

TEST_CASE("server node") {
  ConstellationConfig cfg;
  cfg.geo_server_altitude = 0.02;
  auto ground = ServerNode::from_config(cfg);
  CHECK_FALSE(ground.is_orbiting());
  CHECK(ground.position_at(0.0).position.x == doctest::Approx(kEarthRadius + 0.02));
  CHECK(ground.position_at(0.0).position == ground.position_at(1e4).position);

  cfg.geo_server_altitude = kGeoAltitude;
  auto geo = ServerNode::from_config(cfg);
  CHECK(geo.is_orbiting());
  CHECK(geo.position_at(500.0).position.norm() == doctest::Approx(kEarthRadius + kGeoAltitude));
}

TEST_CASE("ephemeris and distance CSVs") {
  ConstellationConfig cfg;
  auto orbits = build_constellation(cfg);
  const double T = orbits[0].period();
  std::vector<double> times;
  for (int k = 0; k <= 4; ++k) times.push_back(k * T / 4.0);
  std::ostringstream eph, dist;
  write_ephemeris_csv(eph, orbits, times);
  write_distance_csv(dist, orbits, times);
  CHECK(eph.str().rfind("time_s,sat_id,x_km,y_km,z_km\n", 0) == 0);
  CHECK(count_lines(eph.str()) == 1 + 25);
  CHECK(dist.str().rfind("time_s,sat_i,sat_j,dist_km\n", 0) == 0);
  CHECK(count_lines(dist.str()) == 1 + 5 * 10);
}
