#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

using nlohmann::json;

const char* cli_path() { return MEANBOUNDS_CLI_PATH; }

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int run_count = 0;

RunResult run_cli(const std::string& args) {
  const std::string tag = "/tmp/meanbounds_test_" + std::to_string(run_count++);
  const std::string out_path = tag + ".out";
  const std::string err_path = tag + ".err";
  const std::string cmd = std::string(cli_path()) + " " + args + " > " +
                          out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

std::string write_fixture(const std::string& name, const std::string& text) {
  const std::string path = "/tmp/meanbounds_fixture_" + name;
  std::ofstream f(path, std::ios::binary);
  f << text;
  return path;
}

}  // namespace

TEST_CASE("bounds on the three-value fixture") {
  const std::string input = write_fixture("three.csv", "0\n1\n2\n");
  auto r = run_cli("bounds --input " + input + " --gamma 2");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["schemaVersion"] == 1);
  CHECK(j["method"] == "none");
  CHECK(j["n"] == 3);
  CHECK(j["interval"]["lower"].get<double>() == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(j["interval"]["upper"].get<double>() == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(j.contains("constants"));
  CHECK(j["constants"].contains("sigmaSq"));
}

TEST_CASE("gamma 1 gives the degenerate interval at the mean") {
  const std::string input = write_fixture("five.csv", "1\n2\n3\n4\n5\n");
  for (const char* family : {"none", "normal", "symmetric", "logconcave"}) {
    auto r = run_cli("bounds --input " + input + " --gamma 1 --family " +
                     family + " --m-grid 9 --theta-grid 3x3");
    REQUIRE_MESSAGE(r.exit_code == 0, family << ": " << r.err);
    const json j = json::parse(r.out);
    CHECK(j["interval"]["lower"].get<double>() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(j["interval"]["upper"].get<double>() == doctest::Approx(3.0).epsilon(1e-9));
  }
}

TEST_CASE("malformed cell reports the line number and exits 2") {
  const std::string input = write_fixture("bad.csv", "1\n2\noops\n4\n");
  auto r = run_cli("bounds --input " + input + " --gamma 2");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find(":3:") != std::string::npos);
  CHECK(r.err.find("oops") != std::string::npos);
  CHECK(r.err.find("error[parse]") != std::string::npos);
}

TEST_CASE("missing input file exits 2") {
  auto r = run_cli("bounds --input /tmp/definitely_not_here.csv --gamma 2");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error[io]") != std::string::npos);
}

TEST_CASE("header column selection by name") {
  const std::string input =
      write_fixture("named.csv", "id,score\n1,10\n2,20\n3,60\n");
  auto r = run_cli("bounds --input " + input +
                   " --header --column score --gamma 1");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["interval"]["lower"].get<double>() == doctest::Approx(30.0));
  auto bad = run_cli("bounds --input " + input +
                     " --header --column missing --gamma 1");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("bounds output is byte identical across runs") {
  const std::string input =
      write_fixture("det.csv", "0.5\n1.25\n-2\n3.75\n0.125\n2.5\n-1\n0\n");
  const std::string args = "bounds --input " + input +
                           " --gamma 3 --family symmetric --m-grid 15";
  auto a = run_cli(args);
  auto b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("cdf dump") {
  const std::string input =
      write_fixture("cdf.csv", "0\n0.25\n0.5\n1\n1.5\n2\n2.5\n3\n3.5\n4\n");
  const std::string args =
      "cdf-dump --input " + input + " --gamma 2 --m-grid 11";
  auto a = run_cli(args);
  REQUIRE(a.exit_code == 0);
  auto b = run_cli(args);
  CHECK(a.out == b.out);

  // Parse the long-format CSV into per-series level vectors.
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::istringstream is(a.out);
  std::string line;
  std::getline(is, line);
  CHECK(line == "y,level,series");
  while (std::getline(is, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    series[line.substr(c2 + 1)].emplace_back(
        std::stod(line.substr(0, c1)),
        std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
  }
  REQUIRE(series.count("ecdf") == 1);
  REQUIRE(series.count("none") == 1);
  REQUIRE(series.count("symmetric") == 1);
  REQUIRE(series.count("logconcave") == 1);
  const int n = 10;
  for (auto& [name, rows] : series) {
    REQUIRE(rows.size() == (std::size_t)n);
    CHECK(rows.back().second == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (int k = 0; k < n; ++k) {
    CHECK(series["ecdf"][k].second ==
          doctest::Approx((k + 1) / double(n)).epsilon(1e-12));
  }
  // The unconstrained upper-endpoint weights are two-level with ratio gamma:
  // successive level increments take exactly two distinct values.
  std::vector<double> incs;
  double prev = 0.0;
  for (auto& [y, level] : series["none"]) {
    incs.push_back(level - prev);
    prev = level;
  }
  std::vector<double> kinds;
  for (double d : incs) {
    bool found = false;
    for (double k : kinds) {
      if (std::fabs(k - d) < 1e-9) found = true;
    }
    if (!found) kinds.push_back(d);
  }
  REQUIRE(kinds.size() == 2);
  const double ratio = std::max(kinds[0], kinds[1]) / std::min(kinds[0], kinds[1]);
  CHECK(ratio == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("empty plausibility set exits 3") {
  // Two well-separated clusters cannot be matched by any normal CDF within
  // the band at this sample size.
  std::ostringstream data;
  for (int i = 0; i < 60; ++i) data << (i % 2 == 0 ? "0\n" : "100\n");
  const std::string input = write_fixture("bimodal.csv", data.str());
  auto r = run_cli("bounds --input " + input +
                   " --gamma 1.2 --family normal --theta-grid 5x5");
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("error[empty-plausibility-set]") != std::string::npos);
}

TEST_CASE("simulate") {
  SUBCASE("zero reps exits 2") {
    auto r = run_cli("simulate --gamma-true 2 --gamma 2 --reps 0 --seed 1");
    CHECK(r.exit_code == 2);
  }
  SUBCASE("smoke run and identical csv bytes") {
    const std::string csv1 = "/tmp/meanbounds_sim1.csv";
    const std::string csv2 = "/tmp/meanbounds_sim2.csv";
    const std::string args =
        "simulate --pop normal --pop-a 0 --pop-b 1 --n 40 --gamma-true 2 "
        "--gamma 2 --reps 5 --seed 77 --csv ";
    auto a = run_cli(args + csv1);
    auto b = run_cli(args + csv2);
    REQUIRE_MESSAGE(a.exit_code == 0, a.err);
    REQUIRE(b.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(slurp(csv1) == slurp(csv2));
    const json j = json::parse(a.out);
    CHECK(j["reps"] == 5);
    CHECK(j["rng"].get<std::string>().find("mt19937_64") != std::string::npos);
    std::remove(csv1.c_str());
    std::remove(csv2.c_str());
  }
}

TEST_CASE("config file with precedence and unknown-key rejection") {
  const std::string input = write_fixture("cfg_data.csv", "0\n1\n2\n");
  const std::string cfg = write_fixture("run.cfg", "gamma=9\nfamily=none\n");
  // Flag overrides the config file value.
  auto r = run_cli("bounds --input " + input + " --config " + cfg +
                   " --gamma 2");
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  const json j = json::parse(r.out);
  CHECK(j["gamma"].get<double>() == doctest::Approx(2.0));
  // Config alone supplies required flags.
  auto r2 = run_cli("bounds --input " + input + " --config " + cfg);
  REQUIRE(r2.exit_code == 0);
  CHECK(json::parse(r2.out)["gamma"].get<double>() == doctest::Approx(9.0));
  // Unknown keys are rejected.
  const std::string bad = write_fixture("bad.cfg", "gamma=2\nbogus_key=1\n");
  auto r3 = run_cli("bounds --input " + input + " --config " + bad);
  CHECK(r3.exit_code == 2);
}

TEST_CASE("emit weights and lp dump") {
  const std::string input = write_fixture("emit.csv", "0\n1\n2\n");
  const std::string lp_path = "/tmp/meanbounds_lp.txt";
  auto r = run_cli("bounds --input " + input +
                   " --gamma 2 --emit-weights --emit-lp " + lp_path);
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j.contains("weights"));
  CHECK(j["weights"]["upper"].size() == 3);
  CHECK(j["weights"]["upper"][2].get<double>() == doctest::Approx(0.5).epsilon(1e-8));
  const std::string lp_text = slurp(lp_path);
  CHECK(lp_text.find("maximize") != std::string::npos);
  CHECK(lp_text.find("minimize") != std::string::npos);
  CHECK(lp_text.find("eq") != std::string::npos);
  std::remove(lp_path.c_str());
}
