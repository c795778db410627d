#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct CliResult {
  int exit_code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(HARMONICA_CLI_PATH) + " " + args +
                    " 2>/tmp/harmonica_cli_err.txt";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("periods command checks its precondition") {
  CHECK(run_cli("periods --a 1.5").exit_code == 2);
  CHECK(run_cli("periods --a 0").exit_code == 2);
}

TEST_CASE("periods command solves and reports both ratios") {
  auto res = run_cli("periods --a 0.5 --json");
  REQUIRE(res.exit_code == 0);
  auto j = nlohmann::json::parse(res.out);
  auto row = j["rows"][0];
  double b = row["b"].get<double>();
  CHECK(b > -2.0);
  CHECK(b < 0.0);
  CHECK(row["gamma1_residual"].get<double>() < 1e-8);
  CHECK(row["gamma2_real_period"].get<double>() < 1e-8);
  CHECK(std::abs(row["matched_ratio"].get<double>() - b) < 1e-6);
}

TEST_CASE("periods sweep reports the trend") {
  auto res = run_cli("periods --sweep 0.2:0.8:4 --json");
  REQUIRE(res.exit_code == 0);
  auto j = nlohmann::json::parse(res.out);
  CHECK(j["rows"].size() == 4);
  for (const auto& row : j["rows"]) {
    CHECK(row["b"].get<double>() > -2.0);
    CHECK(row["b"].get<double>() < 0.0);
  }
  CHECK(j["monotone_trend"] == "decreasing");
}

TEST_CASE("verify flags a non-immersed family with a witness") {
  auto res = run_cli(
      "verify --family rotational --b=-1 --suite identities --json");
  CHECK(res.exit_code == 1);
  auto j = nlohmann::json::parse(res.out);
  CHECK_FALSE(j["pass"].get<bool>());
  CHECK_FALSE(j["family_valid"].get<bool>());
  CHECK_FALSE(j["immersion"]["pass"].get<bool>());
  // witness on |z|^2 = |b|
  auto witness = j["immersion"]["witness"]["z"].get<std::string>();
  CHECK(!witness.empty());
}

TEST_CASE("verify passes on a sound family and is deterministic") {
  std::string args =
      "verify --family rotational --b 0.3+0.7i --suite identities "
      "--samples 500 --seed 7 --json";
  auto a = run_cli(args);
  auto b = run_cli(args);
  CHECK(a.exit_code == 0);
  // identical up to wall-clock timings
  auto ja = nlohmann::json::parse(a.out);
  auto jb = nlohmann::json::parse(b.out);
  ja.erase("timings_ms");
  jb.erase("timings_ms");
  CHECK(ja == jb);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j["pass"].get<bool>());
  CHECK(j["schema_version"].get<int>() == 1);
  CHECK(j["identities"]["pass"].get<bool>());
}

TEST_CASE("generate writes meshes in the requested format") {
  auto res = run_cli(
      "generate --family catenoid --alpha=-3+3i --beta=-1-i --r1 0 --r2 0 "
      "--grid 24x24 --out /tmp/harmonica_cli_cat.obj --json");
  CHECK(res.exit_code == 0);
  std::ifstream is("/tmp/harmonica_cli_cat.obj");
  REQUIRE(is.good());
  std::string first;
  std::getline(is, first);
  CHECK(first.substr(0, 2) == "v ");

  auto ply = run_cli(
      "generate --family torus --a 0.5 --grid 16x16 "
      "--out /tmp/harmonica_cli_torus.ply");
  CHECK(ply.exit_code == 0);
  std::ifstream ps("/tmp/harmonica_cli_torus.ply", std::ios::binary);
  std::string head;
  std::getline(ps, head);
  CHECK(head == "ply");
}

TEST_CASE("generate rejects invalid parameters and grids") {
  CHECK(run_cli("generate --family flujo --flujo-b 3 --flujo-c 0 "
                "--out /tmp/x.obj")
            .exit_code == 2);
  CHECK(run_cli("generate --family horn --grid nonsense --out /tmp/x.obj")
            .exit_code == 2);
  CHECK(run_cli("generate --family horn --grid 24x24 "
                "--out /missing_dir/x.obj")
            .exit_code == 4);
}

TEST_CASE("spec files drive the verification") {
  {
    std::ofstream os("/tmp/harmonica_cli_spec.json");
    os << R"({"family":"horn","params":{"r1":2,"r2":0}})";
  }
  auto res = run_cli(
      "verify --spec /tmp/harmonica_cli_spec.json --suite ends --json");
  CHECK(res.exit_code == 0);
  auto j = nlohmann::json::parse(res.out);
  CHECK(j["family"]["family"] == "horn");
  bool found_vertical_false = false;
  for (const auto& f : j["flux"])
    if (!f["vertical"].get<bool>()) found_vertical_false = true;
  CHECK(found_vertical_false);
}

TEST_CASE("report command emits the full schema") {
  auto res = run_cli(
      "report --family rotational --b 0.25 --samples 300 "
      "--out /tmp/harmonica_cli_report.json --json");
  CHECK(res.exit_code == 0);
  auto j = nlohmann::json::parse(res.out);
  CHECK(j.contains("identities"));
  CHECK(j.contains("ends"));
  CHECK(j.contains("total_curvature"));
  CHECK(j.contains("timings_ms"));
  std::ifstream is("/tmp/harmonica_cli_report.json");
  nlohmann::json file_copy;
  is >> file_copy;
  CHECK(file_copy["pass"] == j["pass"]);
}
