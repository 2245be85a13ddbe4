#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "orbqfl/cli.hpp"
#include "orbqfl/orbital.hpp"

namespace fs = std::filesystem;
using namespace orbqfl;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"orbqfl"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / "orbqfl_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

std::size_t count_prefix(const std::vector<std::string>& rows, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.rfind(prefix, 0) == 0;
  return n;
}

const std::string kTrainArgs[] = {"--n_sats", "4", "--rounds", "3", "--qubits", "2", "--blobs_per_class", "40",
                                  "--max_fun", "30"};

Result train(const fs::path& out, std::initializer_list<std::string> extra, const std::string& command = "train") {
  std::vector<std::string> args{command, "--out", out.string()};
  args.insert(args.end(), std::begin(kTrainArgs), std::end(kTrainArgs));
  args.insert(args.end(), extra.begin(), extra.end());
  std::vector<const char*> argv{"orbqfl"};
  for (const auto& s : args) argv.push_back(s.c_str());
  std::ostringstream o, e;
  Result r;
  r.code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

}  // namespace

TEST_CASE("orbits") {
  const auto dir = scratch("orbits");
  orbital::OrbitSpec o;
  const double T = o.period();
  auto r = invoke({"orbits", "--out", dir.string(), "--duration", fmt::format("{}", T), "--step", fmt::format("{}", T / 4)});
  CHECK(r.code == 0);
  CHECK(lines(slurp(dir / "ephemeris.csv")).size() == 1 + 25);
  CHECK(lines(slurp(dir / "distances.csv")).size() == 1 + 5 * 10);
  CHECK(fs::exists(dir / "manifest.cfg"));

  r = invoke({"orbits", "--out", dir.string(), "--duration", "0"});
  CHECK(r.code == 0);
  CHECK(lines(slurp(dir / "ephemeris.csv")).size() == 1 + 5);

  r = invoke({"orbits", "--out", dir.string(), "--step", "0"});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.out.empty());

  r = invoke({"orbits", "--config", (dir / "missing.cfg").string()});
  CHECK(r.code != 0);
  CHECK_FALSE(r.err.empty());
  CHECK(r.out.empty());

  r = invoke({"orbits", "--out", dir.string(), "--n_sats", "1"});
  CHECK(r.code == cli::kExitConfig);
}

TEST_CASE("linkbudget") {
  const auto dir = scratch("linkbudget");
  auto r = invoke({"linkbudget", "--out", dir.string(), "--preset", "L3", "--distance", "8086"});
  CHECK(r.code == 0);
  CHECK(r.out.find("margin_db     52.1") != std::string::npos);
  CHECK(r.out.find("fspl_db") != std::string::npos);
  CHECK(r.out.find("eirp_dbw") != std::string::npos);
  CHECK(r.out.find("cn0_dbhz") != std::string::npos);
  CHECK(r.out.find("ebn0_db") != std::string::npos);

  r = invoke({"linkbudget", "--out", dir.string(), "--grid-power", "10:20:10", "--grid-distance", "1000:10000:10"});
  CHECK(r.code == 0);
  CHECK(lines(slurp(dir / "linkbudget_grid.csv")).size() == 101);

  r = invoke({"linkbudget", "--out", dir.string(), "--sweep", "1e6,1e7,1e8", "--sweep_distance", "8086"});
  CHECK(r.code == 0);
  CHECK(lines(slurp(dir / "linkbudget_sweep.csv")).size() == 4);

  r = invoke({"linkbudget", "--out", dir.string()});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());

  r = invoke({"linkbudget", "--out", dir.string(), "--distance", "100", "--sweep", "1e6"});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.out.empty());

  r = invoke({"linkbudget", "--out", dir.string(), "--grid_power", "1:2"});
  CHECK(r.code == cli::kExitUsage);

  r = invoke({"linkbudget", "--out", dir.string(), "--distance", "100", "--preset", "L9"});
  CHECK(r.code == cli::kExitConfig);
}

TEST_CASE("usage errors") {
  auto r = invoke({});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.out.empty());
  r = invoke({"train", "--no-such-flag", "1"});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.out.empty());
  r = invoke({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("linkbudget") != std::string::npos);
}

TEST_CASE("train") {
  const auto a = scratch("train_a");
  const auto b = scratch("train_b");
  auto r = train(a, {});
  REQUIRE(r.code == 0);
  const auto metrics = lines(slurp(a / "metrics.csv"));
  CHECK(metrics.front() == "mode,round,device,train_acc,test_acc,objective,evals,sim_time_s,bits_cum");
  CHECK(metrics.size() == 1 + 12 + 3);
  std::size_t server_rows = 0;
  for (const auto& l : metrics) server_rows += l.find(",server,") != std::string::npos;
  CHECK(server_rows == 3);
  CHECK(lines(slurp(a / "events.csv")).size() == 1 + 4 * 3);

  CHECK(train(b, {}).code == 0);
  CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
  CHECK(slurp(a / "events.csv") == slurp(b / "events.csv"));

  const auto s = scratch("train_server");
  CHECK(train(s, {"--mode", "server"}).code == 0);
  CHECK(lines(slurp(s / "events.csv")).size() == 1 + 2 * 4 * 3);

  const auto d = scratch("train_statlog");
  r = train(d, {"--dataset", "statlog", "--data_dir", (d / "nowhere").string()});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.find("sat.trn") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("manifest reproduces a run") {
  const auto a = scratch("manifest_a");
  const auto b = scratch("manifest_b");
  REQUIRE(train(a, {"--seed", "17"}).code == 0);
  const auto manifest = slurp(a / "manifest.cfg");
  CHECK(manifest.find("seed = 17") != std::string::npos);
  CHECK(manifest.find("# artifact:") != std::string::npos);
  CHECK(manifest.find("# orbqfl ") == 0);
  auto r = invoke({"train", "--config", (a / "manifest.cfg").string(), "--out", b.string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
  CHECK(slurp(a / "events.csv") == slurp(b / "events.csv"));
}

TEST_CASE("flags override the config file, which overrides defaults") {
  const auto dir = scratch("precedence");
  {
    std::ofstream f(dir / "run.cfg");
    f << "# three satellites from the file\nn_sats = 3\nrounds = 1\nqubits = 2\nmax_fun = 5\nblobs_per_class = 20\n";
  }
  auto r = invoke({"train", "--config", (dir / "run.cfg").string(), "--out", (dir / "file").string()});
  REQUIRE(r.code == 0);
  CHECK(lines(slurp(dir / "file" / "events.csv")).size() == 1 + 3);
  r = invoke({"train", "--config", (dir / "run.cfg").string(), "--out", (dir / "flag").string(), "--n-sats", "4"});
  REQUIRE(r.code == 0);
  CHECK(lines(slurp(dir / "flag" / "events.csv")).size() == 1 + 4);

  {
    std::ofstream f(dir / "bad.cfg");
    f << "n_satz = 3\n";
  }
  r = invoke({"train", "--config", (dir / "bad.cfg").string(), "--out", (dir / "bad").string()});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("n_satz") != std::string::npos);
}

TEST_CASE("compare") {
  const auto a = scratch("compare_a");
  const auto b = scratch("compare_b");
  auto r = train(a, {}, "compare");
  REQUIRE(r.code == 0);
  const auto out = lines(r.out);
  REQUIRE(out.size() >= 2);
  const auto orb_hash = out[0].substr(out[0].find(':') + 1);
  const auto server_hash = out[1].substr(out[1].find(':') + 1);
  CHECK(out[0].rfind("shard_hash orb:", 0) == 0);
  CHECK(out[1].rfind("shard_hash server:", 0) == 0);
  CHECK(orb_hash == server_hash);

  const auto metrics = lines(slurp(a / "metrics.csv"));
  std::size_t other = 0;
  for (std::size_t i = 1; i < metrics.size(); ++i) other += metrics[i].rfind("orb,", 0) != 0 && metrics[i].rfind("server,", 0) != 0;
  CHECK(other == 0);
  for (int round = 0; round < 3; ++round) {
    CHECK(count_prefix(metrics, fmt::format("orb,{},server,", round)) == 1);
    CHECK(count_prefix(metrics, fmt::format("server,{},server,", round)) == 1);
  }
  CHECK(train(b, {}, "compare").code == 0);
  CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
  CHECK(slurp(a / "events.csv") == slurp(b / "events.csv"));
}

TEST_CASE("bound") {
  const auto dir = scratch("bound");
  const std::string zero =
      "L = 0\nmu = 0\ndelta_schedule = 0\nN = 1\nK = 1\nR = 10\ngamma_c = 0\ntau_c = 0\ndelta_c = 0\n"
      "rho_loss = 0\nrho = 0\neps_c = 0\nB = 1\nT = 0\nalpha_q = 0\nsigma_q = 0\nN_q = 0\n"
      "theta0_minus_thetastar_sq = 0\n";
  {
    std::ofstream f(dir / "zero.cfg");
    f << zero;
  }
  auto r = invoke({"bound", "--constants", (dir / "zero.cfg").string(), "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto rows = lines(slurp(dir / "bound.csv"));
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == "round,bound_value");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i] == fmt::format("{},0", i));

  {
    std::ofstream f(dir / "missing.cfg");
    f << zero.substr(zero.find("K = 1"));  // drops L, mu, delta_schedule, N
  }
  r = invoke({"bound", "--constants", (dir / "missing.cfg").string(), "--out", dir.string()});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("'L'") != std::string::npos);

  {
    std::ofstream f(dir / "negative.cfg");
    f << "L = -1\n" << zero.substr(zero.find("mu"));
  }
  r = invoke({"bound", "--constants", (dir / "negative.cfg").string(), "--out", dir.string()});
  CHECK(r.code == cli::kExitConfig);

  r = invoke({"bound", "--out", dir.string()});
  CHECK(r.code == cli::kExitUsage);
}
