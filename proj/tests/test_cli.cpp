#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(LO237_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("lo237_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("gen-check: exit 0 normally, nonzero on the perturbed fixture") {
  fs::path d = fresh_dir("gen");
  CHECK(run("gen-check --out " + d.string()) == 0);
  CHECK(run("gen-check --selftest-perturb --out " + d.string()) != 0);
}

TEST_CASE("table: radius 0 is empty; reruns are byte-identical") {
  fs::path d1 = fresh_dir("t1");
  fs::path d2 = fresh_dir("t2");
  CHECK(run("table --radius 0 --out " + d1.string()) == 0);
  CHECK(slurp(d1 / "table.csv") == "word,length,sign\n");

  CHECK(run("table --radius 3 --seed 7 --out " + d1.string()) == 0);
  CHECK(run("table --radius 3 --seed 7 --out " + d2.string()) == 0);
  CHECK(slurp(d1 / "table.json") == slurp(d2 / "table.json"));
  CHECK(slurp(d1 / "table.csv") == slurp(d2 / "table.csv"));
  CHECK(slurp(d1 / "table.csv").find("aa,2,+") != std::string::npos);  // abc positive
}

TEST_CASE("table accepts explicit and fixed-point basepoints") {
  fs::path d = fresh_dir("t3");
  CHECK(run("table --basepoint 5/7 --radius 2 --out " + d.string()) == 0);
  CHECK(run("table --fixed-axis acb --side right --radius 2 --out " + d.string()) == 0);
}

TEST_CASE("approximate with a planted conjugator verifies end to end") {
  fs::path d = fresh_dir("appr");
  CHECK(run("approximate --planted abC --radius 2 --out " + d.string()) == 0);
  const std::string rep = slurp(d / "approximate.json");
  CHECK(rep.find("\"found\": true") != std::string::npos);
  CHECK(rep.find("\"reverified\": true") != std::string::npos);
  CHECK(run("verify " + (d / "approximate.json").string()) == 0);
}

TEST_CASE("verify rejects a corrupted witness with exit 1") {
  fs::path d = fresh_dir("ver");
  REQUIRE(run("approximate --planted abC --radius 3 --out " + d.string()) == 0);
  std::string rep = slurp(d / "approximate.json");
  const auto pos = rep.find("\"conjugator\": \"");
  REQUIRE(pos != std::string::npos);
  // Replace the witness with a word outside the generator alphabet; central
  // corruptions would still verify, since abc acts trivially on orders.
  const auto end = rep.find('"', pos + 15);
  rep = rep.substr(0, pos + 15) + "xq" + rep.substr(end);
  std::ofstream(d / "approximate.json", std::ios::binary) << rep;
  CHECK(run("verify " + (d / "approximate.json").string()) == 1);
}

TEST_CASE("scan produces the two-block matrix and histogram outputs") {
  fs::path d = fresh_dir("scan");
  CHECK(run("scan --sample-size 2 --radius 2 --out " + d.string()) == 0);
  const std::string matrix = slurp(d / "matrix.csv");
  CHECK(!matrix.empty());
  CHECK(fs::exists(d / "histogram.csv"));
  CHECK(fs::exists(d / "histogram.svg"));
  const std::string scan = slurp(d / "scan.json");
  CHECK(scan.find("central obstruction") != std::string::npos);
  CHECK(run("verify " + (d / "scan.json").string()) == 0);
}

TEST_CASE("config file is honored and flags override it") {
  fs::path d = fresh_dir("cfg");
  std::ofstream(d / "exp.ini") << "[experiment]\nseed = 11\nball_radius = 2\n"
                               << "[output]\ndir = " << (d / "from_config").string()
                               << "\n";
  CHECK(run("table --config " + (d / "exp.ini").string()) == 0);
  CHECK(fs::exists(d / "from_config" / "table.json"));
  CHECK(slurp(d / "from_config" / "table.json").find("\"seed\": 11") != std::string::npos);

  // Flag overrides the config seed.
  CHECK(run("table --config " + (d / "exp.ini").string() + " --seed 12 --out " +
            (d / "over").string()) == 0);
  CHECK(slurp(d / "over" / "table.json").find("\"seed\": 12") != std::string::npos);

  // Unknown keys are configuration errors: exit 2.
  std::ofstream(d / "bad.ini") << "[experiment]\nsped = 11\n";
  CHECK(run("table --config " + (d / "bad.ini").string()) == 2);
  CHECK(run("table --radius 99") == 2);
}

TEST_CASE("exact matrices are exported on demand") {
  fs::path d = fresh_dir("mat");
  CHECK(run("gen-check --exact-matrices --out " + d.string()) == 0);
  const std::string rep = slurp(d / "gen_check.json");
  CHECK(rep.find("exact_matrices") != std::string::npos);
  CHECK(rep.find("lambda") != std::string::npos);  // tower coordinates
  CHECK(rep.find("\"tower\"") != std::string::npos);
}

TEST_CASE("blowup and realize demos succeed") {
  fs::path d = fresh_dir("demos");
  CHECK(run("blowup --out " + d.string()) == 0);
  CHECK(run("realize --stage 3 --out " + d.string()) == 0);
  CHECK(slurp(d / "blowup.json").find("\"defect_below_2^-100\": true") !=
        std::string::npos);
}
