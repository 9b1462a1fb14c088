#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qfree/cli_run.hpp"

using namespace qfree;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "qfree_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("density run writes schema-tagged CSV and a manifest") {
  const fs::path dir = temp_dir();
  RunConfig cfg;
  cfg.command = "density";
  cfg.spec_json = R"({"type":"ginibre"})";
  cfg.grid = "-1.5,1.5,-1.5,1.5,16,16";
  cfg.out = (dir / "gin").string();
  CHECK(run(cfg) == kExitOk);
  const std::string csv = slurp(dir / "gin.density.csv");
  CHECK(csv.rfind("# qfree-csv v1\nre,im,rho,valid\n", 0) == 0);
  const std::string manifest = slurp(dir / "gin.manifest.json");
  CHECK(manifest.find("\"command\": \"density\"") != std::string::npos);
  CHECK(manifest.find("\"exit_code\": 0") != std::string::npos);
}

TEST_CASE("identical outputs across thread counts and seeds resolve correctly") {
  const fs::path dir = temp_dir();
  RunConfig cfg;
  cfg.command = "sample";
  cfg.spec_json = R"({"type":"product","a":{"type":"shift","x":[1,0],"of":{"type":"gue"}},
                      "b":{"type":"shift","x":[1,0],"of":{"type":"ginibre"}}})";
  cfg.n = 24;
  cfg.reps = 6;
  cfg.seed = 777;

  cfg.threads = 1;
  cfg.out = (dir / "t1").string();
  CHECK(run(cfg) == kExitOk);
  cfg.threads = 4;
  cfg.out = (dir / "t4").string();
  CHECK(run(cfg) == kExitOk);
  CHECK(slurp(dir / "t1.eigenvalues.csv") == slurp(dir / "t4.eigenvalues.csv"));

  // QFREE_SEED fallback.
  setenv("QFREE_SEED", "777", 1);
  cfg.seed.reset();
  cfg.threads = 2;
  cfg.out = (dir / "env").string();
  CHECK(run(cfg) == kExitOk);
  unsetenv("QFREE_SEED");
  CHECK(slurp(dir / "env.eigenvalues.csv") == slurp(dir / "t1.eigenvalues.csv"));
}

TEST_CASE("compare pipeline produces a full report") {
  const fs::path dir = temp_dir();
  RunConfig cfg;
  cfg.command = "compare";
  cfg.spec_json = R"({"type":"ginibre"})";
  cfg.grid = "-1.4,1.4,-1.4,1.4,24,24";
  cfg.phi_samples = 256;
  cfg.n = 64;
  cfg.reps = 24;
  cfg.seed = 4242;
  cfg.out = (dir / "cmp").string();
  CHECK(run(cfg) == kExitOk);
  const std::string json = slurp(dir / "cmp.compare.json");
  CHECK(json.find("\"coverage\"") != std::string::npos);
  CHECK(json.find("\"l1_error\"") != std::string::npos);
  CHECK(json.find("\"mass_theory\"") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  const fs::path dir = temp_dir();
  RunConfig cfg;
  cfg.command = "density";
  cfg.spec_json = R"({"type":"elliptic","mu":3})";
  cfg.grid = "-1,1,-1,1,16,16";
  cfg.out = (dir / "bad").string();
  CHECK(run(cfg) == kExitUsage);
  cfg.spec_json = R"({"type":"ginibre"})";
  cfg.grid = "nonsense";
  CHECK(run(cfg) == kExitUsage);
  cfg.command = "frobnicate";
  cfg.grid = "-1,1,-1,1,16,16";
  CHECK(run(cfg) == kExitUsage);
}

TEST_CASE("greens run reports the scalar result") {
  const fs::path dir = temp_dir();
  RunConfig cfg;
  cfg.command = "greens";
  cfg.spec_json = R"({"type":"gue"})";
  cfg.z = Complex(3.0, 0.0);
  cfg.out = (dir / "g").string();
  CHECK(run(cfg) == kExitOk);
  const std::string json = slurp(dir / "g.greens.json");
  CHECK(json.find("0.3819660112") != std::string::npos);
  CHECK(json.find("\"regime\": \"exterior\"") != std::string::npos);
}

TEST_CASE("io failure exits 3") {
  RunConfig cfg;
  cfg.command = "density";
  cfg.spec_json = R"({"type":"ginibre"})";
  cfg.grid = "-1,1,-1,1,16,16";
  cfg.out = "/nonexistent_dir_qfree/x";
  CHECK(run(cfg) == kExitIo);
}

}  // TEST_SUITE
