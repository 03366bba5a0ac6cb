#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "eschlab/json_io.hpp"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + ESCHLAB_TOOL_PATH + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), n);
  const int status = pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace

TEST_CASE("classify exit codes and content") {
  const RunResult ok = run("classify --p 0,1,1 --q 0,0,2");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("AlmostPositive") != std::string::npos);
  CHECK(ok.out.find("exceptional: true") != std::string::npos);

  CHECK(run("classify --p 1,1,1 --q 0,0,3").out.find("PositivelyCurved") != std::string::npos);
  CHECK(run("classify --p 0,0,0 --q 0,0,0").code == 2);
  CHECK(run("classify --p banana --q 0,0,2").code == 1);
  CHECK(run("classify --p 1,1 --q 0,0,2").code == 1);
  CHECK(run("nonsense").code == 1);
}

TEST_CASE("catalog enumeration") {
  const RunResult res = run("enumerate --max-abs 2");
  REQUIRE(res.code == 0);
  std::istringstream lines(res.out);
  std::string line;
  long pair_lines = 0, almost = 0;
  bool summary_seen = false;
  nlohmann::json exceptional_canon;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j.contains("summary")) {
      summary_seen = true;
      CHECK(j["summary"]["classes"].contains("AlmostPositive"));
      continue;
    }
    ++pair_lines;
    CHECK(j["admissible"].get<bool>());
    CHECK(j["products"].size() == 6);
    if (j["class"] == "AlmostPositive") {
      ++almost;
      if (exceptional_canon.is_null()) {
        exceptional_canon = nlohmann::json{{"p", j["canonical_p"]}, {"q", j["canonical_q"]}};
      } else {
        CHECK(j["canonical_p"] == exceptional_canon["p"]);
        CHECK(j["canonical_q"] == exceptional_canon["q"]);
      }
    }
  }
  CHECK(summary_seen);
  CHECK(pair_lines > 100);
  CHECK(almost > 0);

  // The exceptional orbit appears exactly once among canonical
  // representatives.  (The class column is per-pair, not per-orbit: the
  // lexicographically least representative carries a different metric.)
  const RunResult canon = run("enumerate --max-abs 2 --canonical-only");
  std::istringstream clines(canon.out);
  long exceptional_orbit_lines = 0;
  while (std::getline(clines, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j.contains("summary")) continue;
    CHECK(j["p"] == j["canonical_p"]);
    CHECK(j["q"] == j["canonical_q"]);
    if (j["canonical_p"] == exceptional_canon["p"] && j["canonical_q"] == exceptional_canon["q"]) {
      ++exceptional_orbit_lines;
    }
  }
  CHECK(exceptional_orbit_lines == 1);

  const RunResult filt = run("enumerate --max-abs 2 --filter FlatPlaneEverywhere");
  std::istringstream flines(filt.out);
  while (std::getline(flines, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j.contains("summary")) continue;
    CHECK(j["class"] == "FlatPlaneEverywhere");
    for (const auto& v : j["products"]) CHECK(v.get<long long>() <= 0);
  }

  CHECK(run("enumerate --max-abs 99").code == 1);
}

TEST_CASE("scan and wilking surfaces") {
  const RunResult flat = run("--samples 60 --format json scan-esch --p 0,0,2 --q 0,1,1");
  REQUIRE(flat.code == 0);
  const auto j = nlohmann::json::parse(flat.out);
  CHECK(j["report"]["certificate_fraction"].get<double>() == 1.0);
  CHECK(j["meta"]["seed"].get<std::uint64_t>() == 0x45534348ull);

  CHECK(run("scan-esch --p 0,0,1 --q 2,-1,0").code == 2);  // not admissible

  const RunResult filt = run("--format json wilking --q 1,-1,0 --mode analyze");
  REQUIRE(filt.code == 0);
  CHECK(nlohmann::json::parse(filt.out)["report"]["verdict"] ==
        "KnownAlmostPositiveHomogeneous");

  CHECK(run("wilking --q 2,4,1 --mode analyze").code == 2);

  const RunResult cert = run("--format json wilking --q 3,1,-2 --mode certify");
  REQUIRE(cert.code == 0);
  const auto cj = nlohmann::json::parse(cert.out);
  CHECK(cj["result"]["case"] == "2c");
  CHECK(cj["result"]["certificate"]["residuals"]["A"].get<double>() < 1e-9);

  const RunResult sweep = run("wilking --q 3,1,-2 --mode sweep --grid 50");
  REQUIRE(sweep.code == 0);
  CHECK(sweep.out.find("theta,h,g,beta,h_prime,g_prime,domain_ok,flag") != std::string::npos);
}

TEST_CASE("seed resolution: env overrides default, flag overrides env") {
  const RunResult env = run("--format json wilking --q 1,-1,0 --mode analyze",
                            "ESCHLAB_SEED=99");
  CHECK(nlohmann::json::parse(env.out)["meta"]["seed"].get<std::uint64_t>() == 99);
  const RunResult flag = run("--seed 7 --format json wilking --q 1,-1,0 --mode analyze",
                             "ESCHLAB_SEED=99");
  CHECK(nlohmann::json::parse(flag.out)["meta"]["seed"].get<std::uint64_t>() == 7);
}

TEST_CASE("config file provides defaults under flags") {
  const std::string path = "/tmp/eschlab_test_config.txt";
  {
    std::ofstream f(path);
    f << "# comment\nseed=123\nsamples=17\n";
  }
  const RunResult res = run("--config " + path + " --format json wilking --q 1,-1,0 --mode analyze");
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j["meta"]["seed"].get<std::uint64_t>() == 123);
  CHECK(j["meta"]["samples"].get<int>() == 17);
  std::remove(path.c_str());
}

TEST_CASE("wire formats round-trip") {
  const esch::PQPair pair = esch::PQPair::make({0, 1, 1}, {0, 0, 2});
  CHECK(esch::pqpair_from_json(esch::to_json(pair)) == pair);

  esch::Rng rng(77);
  const esch::SU3Point a = esch::haar_su3(rng);
  const esch::Json j = esch::to_json(a);
  CHECK(j.size() == 9);  // row-major [re, im] pairs
  CHECK((esch::mat3_from_json(j) - a.m).norm() < 1e-15);

  const auto cert = esch::build_certificate(a, esch::PQPair::make({0, 0, 2}, {0, 1, 1}), 1.0);
  REQUIRE(cert.has_value());
  const esch::Json cj = esch::to_json(*cert);
  CHECK(cj.contains("A"));
  CHECK(cj.contains("kind"));
  CHECK(cj.contains("k"));
  CHECK(cj.contains("X"));
  CHECK(cj.contains("residuals"));
}

TEST_CASE("negative control: an absurd tolerance makes the suite fail") {
  const RunResult res = run("--tol-curvature 1e-30 verify-paper --level fast");
  CHECK(res.code == 3);
}

TEST_CASE("empty sweep range produces only the summary") {
  const RunResult res = run("enumerate --max-abs 0");
  REQUIRE(res.code == 0);
  std::istringstream lines(res.out);
  std::string line;
  long rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 1);  // the all-zero pair is inadmissible
  CHECK(res.out.find("\"summary\"") != std::string::npos);
}

TEST_CASE("identical invocations produce identical bytes") {
  const std::string cmd = "--format json --seed 5 verify-paper --level fast";
  const RunResult a = run(cmd);
  const RunResult b = run(cmd);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());

  const RunResult c = run("--format json --seed 6 verify-paper --level fast");
  CHECK(c.out != a.out);  // seed is embedded in the report
}
