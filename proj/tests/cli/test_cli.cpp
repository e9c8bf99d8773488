#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "rgw/model.hpp"

namespace fs = std::filesystem;
using rgw::cli::run;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("rgw_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

// Runs with --out into the scratch dir and returns the CSV text.
std::string run_to(const std::string& name, std::vector<std::string> args, int want_rc = 0) {
  const auto out = (scratch() / name).string();
  args.insert(args.end(), {"--out", out});
  REQUIRE(run(args) == want_rc);
  return slurp(out);
}

}  // namespace

TEST_CASE("densities example 2") {
  const auto rows = csv(run_to("d2.csv", {"densities", "--example", "2", "--n-max", "4"}));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0][0] == "n");
  CHECK(rows[0][1] == "phi_n");
  CHECK(rows[1][1].rfind("1", 0) == 0);
  CHECK(std::stod(rows[2][1]) == 3.0);
  CHECK(std::stod(rows[3][1]) == 4.0);
  CHECK(rows[4][1].rfind("6.66666666666666666666666666666666666666", 0) == 0);
  CHECK(std::abs(std::stod(rows[2][2]) - 1.5) < 1e-15);
}

TEST_CASE("densities example 0 is flat") {
  const auto rows = csv(run_to("d0.csv", {"densities", "--example", "0", "--n-max", "5"}));
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) == 1.0);
}

TEST_CASE("engines agree byte for byte") {
  for (const char* ex : {"1", "2", "3a"}) {
    CAPTURE(ex);
    const auto a = run_to("rec.csv", {"densities", "--example", ex, "--n-max", "50", "--engine", "recurrence"});
    const auto b = run_to("op.csv", {"densities", "--example", ex, "--n-max", "50", "--engine", "operator"});
    CHECK(a == b);
  }
}

TEST_CASE("measure file matches the named example") {
  const auto path = scratch() / "ex2.json";
  std::ofstream(path) << rgw::measure_to_json(rgw::example_measure("2"));
  const auto a = run_to("mf.csv", {"densities", "--measure", path.string(), "--n-max", "20"});
  const auto b = run_to("ex.csv", {"densities", "--example", "2", "--n-max", "20"});
  CHECK(a == b);
}

TEST_CASE("roots") {
  const auto rows = csv(run_to("r2.csv", {"roots", "--example", "2", "--box", "2,3,0,12"}));
  bool found = false;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (std::abs(std::stod(rows[i][0]) - 2.545364930374021) < 1e-12 &&
        std::abs(std::stod(rows[i][1]) - 10.75397517526887) < 1e-12)
      found = true;
  CHECK(found);

  const auto p = csv(run_to("r3.csv", {"roots", "--two-poly", "0.4375,0.75", "--primary"}));
  REQUIRE(p.size() == 2);
  const double closed = std::log((std::sqrt(23.0 / 4.0) - 1.0) / 2.0) / std::log(1.25);
  CHECK(std::abs(std::stod(p[1][0]) - closed) < 1e-14);

  const auto e1 = csv(run_to("r1.csv", {"roots", "--example", "1", "--primary"}));
  REQUIRE(e1.size() == 2);
  CHECK(std::abs(std::stod(e1[1][0]) + 0.3904295156631794) < 1e-14);
}

TEST_CASE("manifest and replay") {
  const auto out = (scratch() / "rep.csv").string();
  REQUIRE(run({"densities", "--example", "3a", "--n-max", "30", "--mode", "rational", "--out", out}) == 0);
  const auto m = nlohmann::json::parse(slurp(out + ".manifest.json"));
  CHECK(m["command"] == "densities");
  CHECK(m["mode"] == "rational");
  CHECK(m["outputs"][0]["sha256"] == rgw::cli::sha256_hex(slurp(out)));
  CHECK(m.contains("version"));
  CHECK(m.contains("wall_time_s"));
  CHECK(run({"replay", out + ".manifest.json"}) == 0);

  // A tampered checksum is reported as a mismatch.
  auto bad = m;
  bad["outputs"][0]["sha256"] = std::string(64, '0');
  const auto bad_path = scratch() / "bad.manifest.json";
  std::ofstream(bad_path) << bad.dump();
  CHECK(run({"replay", bad_path.string()}) == 3);
}

TEST_CASE("picard and simulate") {
  const auto pic = (scratch() / "pic.csv").string();
  REQUIRE(run({"picard", "--grid-step", "1e-3", "--iters", "60", "--every", "100", "--out", pic}) == 0);
  const auto pm = nlohmann::json::parse(slurp(pic + ".manifest.json"));
  CHECK(std::abs(std::stod(pm["results"]["H1_estimate"].get<std::string>()) - 1.6294482) < 5e-3);

  const auto sim = (scratch() / "sim.csv").string();
  REQUIRE(run({"simulate", "--example", "2", "--t", "2", "--trials", "1e5", "--seed", "1", "--out", sim}) == 0);
  const auto sm = nlohmann::json::parse(slurp(sim + ".manifest.json"));
  CHECK(sm["results"]["chi_square"]["pass"] == true);
  const auto rows = csv(slurp(sim));
  CHECK(rows[0][0] == "n");
}

TEST_CASE("exit codes") {
  CHECK(run({}) == 2);
  CHECK(run({"densities", "--n-max", "4"}) == 2);                        // no selector
  CHECK(run({"densities", "--example", "9", "--n-max", "4"}) == 2);      // unknown example
  CHECK(run({"densities", "--example", "2", "--n-max", "4", "--mode", "fast"}) == 2);
  CHECK(run({"picard", "--grid-step", "0.3"}) == 2);                     // does not divide 1
  CHECK(run({"replay", (scratch() / "missing.json").string()}) == 4);
  CHECK(run({"densities", "--example", "2", "--n-max", "4", "--out", "/nonexistent/dir/x.csv"}) == 4);
  const auto bad = scratch() / "bad_measure.json";
  std::ofstream(bad) << "{ not json";
  CHECK(run({"densities", "--measure", bad.string(), "--n-max", "4"}) == 2);
}

TEST_CASE("cleanup") { fs::remove_all(scratch()); }
