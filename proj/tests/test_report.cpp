#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "abdr/report.hpp"

using namespace abdr;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path work_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("abdr_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

/// Run the CLI binary; returns the process exit code.
int run_cli(const std::string& args) {
  std::string cmd = std::string(ABDR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config serialization covers optional fields") {
  EstimatorConfig config;
  config.rng_seed = 99;
  json j = to_json(config);
  CHECK(j["rng_seed"] == 99);
  CHECK(j["bootstrap_reps"] == 1000);
  CHECK(!j.contains("prior"));
  CHECK(!j["match"].contains("caliper"));

  config.prior = PriorSpec{};
  config.match.caliper = 0.25;
  j = to_json(config);
  CHECK(j["prior"]["kind"] == "normal_on_coefficient");
  CHECK(j["prior"]["faith_k"] == 1.0);
  CHECK(j["match"]["caliper"] == 0.25);
}

TEST_CASE("estimate artifact layout") {
  EstimateReport rep;
  rep.kind = EstimatorKind::DR;
  rep.bayes = summarize_ate({1.0, 2.0, 3.0});
  rep.frequentist = FrequentistResult{2.1, 0.4, 50};
  EstimatorConfig config;
  config.rng_seed = 5;

  json j = estimate_artifact({rep}, config, false, 10.0);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["artifact"] == "estimate");
  CHECK(j["seed"] == 5);
  REQUIRE(j["estimates"].size() == 1);
  CHECK(j["estimates"][0]["kind"] == "dr");
  CHECK(j["estimates"][0]["bayes"]["mean"] == 2.0);
  CHECK(!j["estimates"][0]["bayes"].contains("samples"));
  CHECK(j["estimates"][0]["frequentist"]["reps"] == 50);
  CHECK(j["estimates"][0]["ate_percent_of_baseline"] == doctest::Approx(20.0));
  CHECK(j["baseline_mean"] == 10.0);

  json with_samples = estimate_artifact({rep}, config, true, std::nullopt);
  CHECK(with_samples["estimates"][0]["bayes"]["samples"].size() == 3);
  CHECK(!with_samples.contains("baseline_mean"));
}

TEST_CASE("text tables carry every row and a reproducibility footer") {
  SimulationReport sim;
  sim.runs = 3;
  sim.n = 10;
  sim.true_ate = 5.0;
  sim.rows = {{"BOR1", 5.1, 0.2, 0.21, {}}, {"BDR3", 5.4, 0.9, 1.06, {}}};
  EstimatorConfig config;
  config.rng_seed = 123;
  std::string table = simulation_table(sim, config);
  CHECK(table.find("BOR1") != std::string::npos);
  CHECK(table.find("BDR3") != std::string::npos);
  CHECK(table.find("5.100") != std::string::npos);
  CHECK(table.find("# seed=123") != std::string::npos);

  EstimateReport rep;
  rep.kind = EstimatorKind::OR;
  rep.bayes = summarize_ate({2.0, 2.0});
  std::string etable = estimate_table({rep}, {"or"}, config, 8.0);
  CHECK(etable.find("or") != std::string::npos);
  CHECK(etable.find("2.000") != std::string::npos);
  CHECK(etable.find("25.0%") != std::string::npos);
  CHECK(etable.find("# seed=123") != std::string::npos);
}

TEST_CASE("svg histogram embeds its metadata and one series per set") {
  std::string svg = svg_histogram({{1.0, 2.0, 2.5}, {1.5, 1.5, 3.0}},
                                  {"a", "b"}, "title & more",
                                  "{\"seed\":42}");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("{\"seed\":42}") != std::string::npos);
  CHECK(svg.find("title &amp; more") != std::string::npos);
  std::size_t polylines = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    ++pos;
  }
  CHECK(polylines == 2);

  // degenerate inputs must still produce a well-formed document
  std::string flat = svg_histogram({{3.0, 3.0, 3.0}}, {"flat"}, "t", "{}");
  CHECK(flat.rfind("<svg", 0) == 0);
  CHECK(flat.find("</svg>") != std::string::npos);
}

TEST_CASE("cli: simulation output is byte-identical across runs and threads") {
  auto a = work_dir("sim_a");
  auto b = work_dir("sim_b");
  std::string base = "simulate --runs 3 --n 120 --reps 15 --resample-V 30 --seed 77";
  REQUIRE(run_cli(base + " --threads 1 --out-dir " + a.string()) == 0);
  REQUIRE(run_cli(base + " --threads 3 --out-dir " + b.string()) == 0);
  std::string ja = slurp(a / "simulation.json");
  CHECK(ja == slurp(b / "simulation.json"));
  CHECK(slurp(a / "simulation.txt") == slurp(b / "simulation.txt"));

  json parsed = json::parse(ja);
  CHECK(parsed["seed"] == 77);
  CHECK(parsed["rows"].size() == 5);
  CHECK(parsed["rows"][0]["name"] == "BOR1");
}

TEST_CASE("cli: bad usage exits with code 2") {
  auto dir = work_dir("usage");
  CHECK(run_cli("simulate --runs 0 --seed 1 --out-dir " + dir.string()) == 2);
  CHECK(run_cli("estimate --seed 1") == 2);  // --input is required
  CHECK(run_cli("") == 2);                   // a subcommand is required
}

TEST_CASE("cli: estimate pipeline end to end") {
  auto dir = work_dir("estimate");
  auto data = dir / "data.csv";
  // control-rich assignment so 1:1 matching without replacement works
  REQUIRE(run_cli("simulate --data-out " + data.string() +
                  " --n 600 --alpha0 -1 --seed 11 --out-dir " + dir.string()) == 0);
  REQUIRE(run_cli("estimate --input " + data.string() +
                  " --covariate-cols x --estimators or,dr --reps 25"
                  " --resample-V 50 --frequentist --frequentist-reps 25"
                  " --emit-samples --seed 12 --out-dir " + dir.string()) == 0);

  json artifact = json::parse(slurp(dir / "estimate.json"));
  CHECK(artifact["schema_version"] == kSchemaVersion);
  CHECK(artifact["seed"] == 12);
  REQUIRE(artifact["estimates"].size() == 2);
  CHECK(artifact["estimates"][0]["kind"] == "or");
  CHECK(artifact["estimates"][1]["kind"] == "dr");
  CHECK(artifact["estimates"][0]["bayes"]["samples"].size() == 25);
  CHECK(artifact["estimates"][1]["frequentist"]["reps"] == 25);
  CHECK(slurp(dir / "posterior_or.svg").rfind("<svg", 0) == 0);
  CHECK(slurp(dir / "posterior_dr.svg").rfind("<svg", 0) == 0);
  CHECK(slurp(dir / "estimate.txt").find("# seed=12") != std::string::npos);

  // merge the artifact with itself; duplicate kinds get disambiguated
  auto rep_dir = work_dir("merged");
  REQUIRE(run_cli("report --inputs " + (dir / "estimate.json").string() + " " +
                  (dir / "estimate.json").string() + " --out-dir " +
                  rep_dir.string()) == 0);
  std::string table = slurp(rep_dir / "report.txt");
  CHECK(table.find("or (estimate.json)") != std::string::npos);
  CHECK(slurp(rep_dir / "report.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("cli: report rejects unknown schema versions") {
  auto dir = work_dir("schema");
  std::ofstream(dir / "old.json") << "{\"schema_version\": 999, \"estimates\": []}";
  CHECK(run_cli("report --inputs " + (dir / "old.json").string() +
                " --out-dir " + dir.string()) == 1);
}

TEST_CASE("cli: difference subcommand") {
  auto dir = work_dir("diff");
  std::ofstream(dir / "panel.csv") << "id,d,before,after\n1,1,2.0,9.0\n2,0,4.0,1.0\n";
  REQUIRE(run_cli("difference --input " + (dir / "panel.csv").string() +
                  " --pre-col before --post-col after --out-col y --output " +
                  (dir / "out.csv").string()) == 0);
  std::string out = slurp(dir / "out.csv");
  CHECK(out.find("id,d,before,after,y") != std::string::npos);
  CHECK(out.find("1,1,2.0,9.0,7") != std::string::npos);
  CHECK(out.find("2,0,4.0,1.0,-3") != std::string::npos);
}

TEST_CASE("cli: match subcommand writes pairs, trimmed data and overlap") {
  auto dir = work_dir("match");
  auto data = dir / "data.csv";
  REQUIRE(run_cli("simulate --data-out " + data.string() +
                  " --n 400 --alpha0 -1 --seed 21 --out-dir " + dir.string()) == 0);
  REQUIRE(run_cli("match --input " + data.string() +
                  " --covariate-cols x --seed 22 --out-dir " + dir.string()) == 0);
  CHECK(slurp(dir / "pairs.csv").rfind("treated_row,control_row,distance", 0) == 0);
  json overlap = json::parse(slurp(dir / "overlap.json"));
  CHECK(overlap["artifact"] == "overlap");
  CHECK(overlap["pairs"].get<int>() > 0);
  CHECK(overlap["trimmed_n"].get<int>() == 2 * overlap["pairs"].get<int>());
  CHECK(fs::exists(dir / "trimmed.csv"));
}
