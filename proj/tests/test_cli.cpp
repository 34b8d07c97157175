#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"
#include "vtlscuc/io.hpp"

using namespace vtlscuc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = VTLSCUC_CLI_PATH;
const fs::path kData = VTLSCUC_DATA_DIR;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("vtlscuc-cli-" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliResult run_cli(const std::string& args) {
  TempDir cap;
  auto out_file = cap.path / "stdout.txt";
  auto err_file = cap.path / "stderr.txt";
  std::string cmd = kCli + " " + args + " > '" + out_file.string() + "' 2> '" +
                    err_file.string() + "'";
  int rc = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

}  // namespace

TEST_CASE("validate accepts bundled cases") {
  for (const char* name :
       {"oracle_1bus", "oracle_2bus", "oracle_pt", "oracle_bess",
        "allvariants", "vss3bus", "ieee24"}) {
    auto r = run_cli("validate --case " +
                     (kData / "cases" / (std::string(name) + ".json")).string());
    INFO(name << ": " << r.err);
    CHECK(r.code == 0);
    CHECK(r.out.find("case OK") != std::string::npos);
  }
}

TEST_CASE("validate rejects broken cases with exit 1") {
  TempDir dir;
  auto c = fixtures::two_bus_congested(2);
  c.branches[0].reactance_pu = -1.0;
  save_case(c, dir.path / "bad.json");
  auto r = run_cli("validate --case " + (dir.path / "bad.json").string());
  CHECK(r.code == 1);
  CHECK(r.err.find("reactance_pu") != std::string::npos);

  auto missing = run_cli("validate --case " + (dir.path / "nope.json").string());
  CHECK(missing.code == 1);
}

TEST_CASE("gen-scenarios is reproducible byte for byte") {
  TempDir dir;
  auto case_path = (kData / "cases" / "allvariants.json").string();
  auto a = dir.path / "a.json";
  auto b = dir.path / "b.json";
  auto r1 = run_cli("gen-scenarios --case " + case_path +
                    " --count 3 --seed 7 --out " + a.string());
  auto r2 = run_cli("gen-scenarios --case " + case_path +
                    " --count 3 --seed 7 --out " + b.string());
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  CHECK(slurp(a) == slurp(b));

  auto r3 = run_cli("gen-scenarios --case " + case_path +
                    " --count 3 --seed 8 --out " + b.string());
  REQUIRE(r3.code == 0);
  CHECK(slurp(a) != slurp(b));
}

TEST_CASE("solve writes the full artifact set") {
  TempDir dir;
  auto out = dir.path / "run";
  auto r = run_cli("solve --case " +
                   (kData / "cases" / "oracle_2bus.json").string() +
                   " --variant base --count 1 --seed 1 --out " + out.string());
  INFO(r.err);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("status=optimal") != std::string::npos);
  for (const char* f : {"solution.json", "metrics.json", "metrics.csv",
                        "manifest.json", "scenarios.json"})
    CHECK(fs::exists(out / f));

  auto metrics = json::parse(slurp(out / "metrics.json"));
  CHECK(metrics["operational_cost"]["total"].get<double>() ==
        Catch::Approx(8600.0).margin(1.0));
  CHECK(metrics["variant"] == "base");
  // The congested line shows up in the congestion stats.
  CHECK(metrics["congestion"]["distinct_branches"][0].get<int>() == 1);

  auto manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["schema"] == "vtl-scuc-run/1");
  CHECK(manifest["case_hash"].get<std::string>().size() == 16);
  CHECK(manifest["status"] == "optimal");

  auto solution = json::parse(slurp(out / "solution.json"));
  CHECK(solution["schema"] == "vtl-scuc-sol/1");
  CHECK(solution["lmp"].is_array());
}

TEST_CASE("solve accepts a scenario file instead of generation flags") {
  TempDir dir;
  auto c = load_case(kData / "cases" / "vss3bus.json");
  auto out = dir.path / "run";
  auto r = run_cli("solve --case " +
                   (kData / "cases" / "vss3bus.json").string() +
                   " --variant base --scenarios " +
                   (kData / "scenarios" / "vss3bus_scen.json").string() +
                   " --out " + out.string());
  INFO(r.err);
  REQUIRE(r.code == 0);
  // Provided scenarios are not re-emitted.
  CHECK_FALSE(fs::exists(out / "scenarios.json"));
  CHECK(fs::exists(out / "solution.json"));
}

TEST_CASE("solve exits 2 on infeasible instances") {
  TempDir dir;
  auto c = fixtures::one_bus(2);
  c.thermal_gens[0].p_max_mw = 50;  // load is 100
  save_case(c, dir.path / "infeasible.json");
  auto r = run_cli("solve --case " + (dir.path / "infeasible.json").string() +
                   " --variant base --count 1 --seed 1 --out " +
                   (dir.path / "run").string());
  CHECK(r.code == 2);
  CHECK(r.err.find("infeasible") != std::string::npos);
}

TEST_CASE("solve exits 1 on bad arguments") {
  auto r = run_cli("solve --case " +
                   (kData / "cases" / "oracle_2bus.json").string() +
                   " --variant warp --count 1 --seed 1 --out /tmp/x");
  CHECK(r.code == 1);
  // Missing variant prerequisite is also a usage error.
  auto r2 = run_cli("solve --case " +
                    (kData / "cases" / "oracle_2bus.json").string() +
                    " --variant vtl --count 1 --seed 1 --out /tmp/x");
  CHECK(r2.code == 1);
  // No scenario source at all.
  auto r3 = run_cli("solve --case " +
                    (kData / "cases" / "oracle_2bus.json").string() +
                    " --variant base --out /tmp/x");
  CHECK(r3.code == 1);
}

TEST_CASE("compare emits tables and per-variant runs") {
  TempDir dir;
  auto out = dir.path / "cmp";
  auto r = run_cli("compare --case " +
                   (kData / "cases" / "allvariants.json").string() +
                   " --variants base,pt,bess,vtl --count 2 --seed 3 --out " +
                   out.string());
  INFO(r.err);
  REQUIRE(r.code == 0);
  for (const char* f :
       {"comparison.json", "comparison.csv", "cost_payment.csv",
        "congestion.csv", "curtailment.csv", "branch_loading.csv",
        "manifest.json", "scenarios.json"})
    CHECK(fs::exists(out / f));
  for (const char* v : {"base", "pt", "bess", "vtl"})
    CHECK(fs::exists(out / v / "metrics.json"));

  auto cmp = json::parse(slurp(out / "comparison.json"));
  CHECK(cmp["baseline"] == "base");
  CHECK(cmp["variants"].size() == 4);
  CHECK(cmp["rows"]["operational_cost"][0]["value"].get<double>() ==
        Catch::Approx(100.0));
  CHECK(cmp.contains("derived_claims"));

  auto loading = slurp(out / "branch_loading.csv");
  CHECK(loading.find("variant,scenario,branch,hour,loading_fraction") == 0);
  CHECK(loading.find("base,1,") != std::string::npos);
  CHECK(loading.find("vtl,2,") != std::string::npos);
}

TEST_CASE("report reproduces solve metrics from persisted artifacts") {
  TempDir dir;
  auto case_path = (kData / "cases" / "oracle_2bus.json").string();
  auto run_a = dir.path / "a";
  auto r1 = run_cli("solve --case " + case_path +
                    " --variant base --count 2 --seed 5 --out " +
                    run_a.string());
  REQUIRE(r1.code == 0);
  auto out = dir.path / "rep";
  auto r2 = run_cli("report --case " + case_path + " --scenarios " +
                    (run_a / "scenarios.json").string() + " --runs " +
                    run_a.string() + " --out " + out.string());
  INFO(r2.err);
  REQUIRE(r2.code == 0);
  REQUIRE(fs::exists(out / "base-metrics.csv"));
  CHECK(slurp(out / "base-metrics.csv") == slurp(run_a / "metrics.csv"));
}
