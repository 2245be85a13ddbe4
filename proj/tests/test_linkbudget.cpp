#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbqfl/linkbudget.hpp"

using namespace orbqfl::linkbudget;

namespace {

constexpr double kChord72 = 8085.735;  // 2 * 6878.137 * sin(36 deg)

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("free-space path loss") {
  // 4 pi d f / c = 1 with d in km
  const double f = 1e9;
  const double d = kSpeedOfLight / (4.0 * std::numbers::pi * f) / 1000.0;
  CHECK(std::abs(fspl(d, f)) < 1e-9);
  CHECK(fspl(500.0, 2e9) == doctest::Approx(152.4478).epsilon(1e-6));
  for (double freq : {1e9, 2.2e9, 12e9})
    for (double dist : {10.0, 800.0, 36000.0}) CHECK(fspl(2.0 * dist, freq) - fspl(dist, freq) == doctest::Approx(6.0206).epsilon(1e-5));
  CHECK_THROWS_AS(fspl(0.0, 2e9), std::invalid_argument);
  CHECK_THROWS_AS(fspl(100.0, -1.0), std::invalid_argument);
}

TEST_CASE("inter-satellite budget at the 72 degree chord") {
  auto spec = preset_s2s();
  CHECK(spec.frequency == 2.2e9);
  auto r = link_budget(spec, kChord72);
  // hand-chained: EIRP 71, FSPL 177.4506, C/N0 = 71 - 177.4506 + 10 + 228.601
  CHECK(r.eirp == doctest::Approx(71.0));
  CHECK(r.fspl == doctest::Approx(177.4506).epsilon(1e-6));
  CHECK(r.cn0 == doctest::Approx(71.0 - r.fspl + 10.0 + 228.601));
  CHECK(r.ebn0 == doctest::Approx(r.cn0 - 70.0));
  CHECK(r.margin == doctest::Approx(52.1504).epsilon(1e-5));
  spec.tx_power = 16.0;
  CHECK(link_budget(spec, kChord72).margin == doctest::Approx(51.1504).epsilon(1e-5));

  spec.required_ebn0 = link_budget(spec, kChord72).ebn0;
  CHECK(std::abs(link_budget(spec, kChord72).margin) < 1e-12);
}

TEST_CASE("presets") {
  CHECK(preset("L1").name == preset_g2s().name);
  CHECK(preset("s2g").name == preset_s2g().name);
  CHECK(preset("L3").frequency == 2.2e9);
  CHECK_THROWS_AS(preset("L9"), std::invalid_argument);
}

TEST_CASE("margin falls 10 dB per decade of bitrate") {
  const auto spec = preset_s2s();
  const std::vector<double> rates{1e6, 10e6, 100e6};
  auto m = margin_vs_bitrate(spec, kChord72, rates);
  REQUIRE(m.size() == 3);
  CHECK(m[0].second == doctest::Approx(62.1504).epsilon(1e-5));
  CHECK(m[1].second == doctest::Approx(52.1504).epsilon(1e-5));
  CHECK(m[2].second == doctest::Approx(42.1504).epsilon(1e-5));
  CHECK(m[0].second - m[1].second == doctest::Approx(10.0).epsilon(1e-12));
  const std::vector<double> one{10e6};
  CHECK(margin_vs_bitrate(spec, kChord72, one)[0].second == link_budget(spec, kChord72).margin);
}

TEST_CASE("margin grid") {
  const auto spec = preset_s2s();
  const std::vector<double> powers{10, 11, 12, 16};
  const std::vector<double> dists{1000, 2000, 5000, kChord72};
  auto g = margin_grid(spec, powers, dists);
  REQUIRE(g.size() == 4);
  for (std::size_t j = 0; j < dists.size(); ++j) CHECK(g[1][j] - g[0][j] == doctest::Approx(1.0));
  for (const auto& row : g)
    for (std::size_t j = 0; j + 1 < row.size(); ++j) CHECK(row[j + 1] < row[j]);
  CHECK(g[3][3] == doctest::Approx(51.1504).epsilon(1e-5));
}

TEST_CASE("transmission delay") {
  CHECK(transmission_delay(1e6, 10e6, 1000.0) == doctest::Approx(0.1 + 1e6 / kSpeedOfLight).epsilon(1e-12));
  CHECK(transmission_delay(1e6, 10e6, 1000.0) == doctest::Approx(0.1033356).epsilon(1e-6));
  CHECK(transmission_delay(0.0, 10e6, 1000.0) == doctest::Approx(1e6 / kSpeedOfLight));
  CHECK(transmission_delay(10e6, 10e6, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(transmission_delay(1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(transmission_delay(-1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("spec validation") {
  LinkSpec s;
  s.bitrate = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = LinkSpec{};
  s.frequency = std::nan("");
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("CSV writers") {
  const auto spec = preset_s2s();
  std::ostringstream rep, grid, sweep;
  const std::vector<double> dists{1000.0, kChord72};
  write_report_csv(rep, spec, dists);
  CHECK(count_lines(rep.str()) == 3);
  std::vector<double> powers, axis;
  for (int k = 0; k < 10; ++k) {
    powers.push_back(10.0 + k);
    axis.push_back(1000.0 * (k + 1));
  }
  write_grid_csv(grid, spec, powers, axis);
  CHECK(count_lines(grid.str()) == 101);
  const std::vector<double> rates{1e6, 1e7};
  write_sweep_csv(sweep, spec, kChord72, rates);
  CHECK(count_lines(sweep.str()) == 3);
}
