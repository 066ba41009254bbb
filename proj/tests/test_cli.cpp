#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "nlkl/io.hpp"

namespace fs = std::filesystem;

namespace {

fs::path work() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "nlkl_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + NLKL_CLI_PATH + "\" " + args + " > \"" +
                          (work() / "last.log").string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string path(const std::string& name) { return "\"" + (work() / name).string() + "\""; }

void put(const std::string& name, const std::string& text) { nlkl::write_text(work() / name, text); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("generate then learn") {
  put("gen.json", R"({"kernel": "gaussian", "half_width": 12, "dx": 0.2})");
  REQUIRE(run("generate --config " + path("gen.json") + " --out " + path("data.json")) == 0);
  CHECK(fs::exists(work() / "data.json"));

  fs::create_directories(work() / "learn");
  REQUIRE(run("learn --data " + path("data.json") + " --regularizer rkhs --degree 2 --truth gaussian --out " +
              path("learn")) == 0);
  for (const char* f : {"estimate.json", "measure.csv", "lcurve.csv", "lcurve.svg", "report.json", "estimate.svg"}) {
    CHECK_MESSAGE(fs::exists(work() / "learn" / f), f);
  }
  CHECK(slurp(work() / "last.log").find("relative L2(rho) error") != std::string::npos);

  // same seed, same bytes
  REQUIRE(run("generate --config " + path("gen.json") + " --nsr 0.5 --seed 3 --out " + path("n1.json")) == 0);
  REQUIRE(run("generate --config " + path("gen.json") + " --nsr 0.5 --seed 3 --out " + path("n2.json")) == 0);
  CHECK(slurp(work() / "n1.json") == slurp(work() / "n2.json"));
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  put("data_stub.json", "{}");
  CHECK(run("learn --data " + path("data_stub.json") + " --regularizer h1 --out " + path("x")) == 2);
  CHECK(run("learn --data " + path("data_stub.json") + " --out " + path("x")) == 2);

  put("broken.json", "{\"dx\": ");
  CHECK(run("generate --config " + path("broken.json") + " --out " + path("y.json")) == 2);
  put("badkernel.json", R"({"kernel": "cubic"})");
  CHECK(run("generate --config " + path("badkernel.json") + " --out " + path("y.json")) == 2);
  put("badsweep.json", R"({"dx_ladder": [0.1], "colour": 1})");
  CHECK(run("sweep --config " + path("badsweep.json") + " --out " + path("sw")) == 2);
  put("baddegree.json", R"({"degree": 7})");
  CHECK(run("generate --config " + path("gen.json") + " --out " + path("d2.json")) == 0);
  CHECK(run("learn --data " + path("d2.json") + " --config " + path("baddegree.json") + " --out " + path("x")) == 2);
}

TEST_CASE("degenerate data exits with 3") {
  // constant inputs: every difference vanishes and the exploration measure is empty
  put("flat.json", R"({"x0": 0, "dx": 0.1, "count": 5, "pairs": [{"u": [1,1,1,1,1], "f": [0,0,0,0,0]}]})");
  fs::create_directories(work() / "flat");
  CHECK(run("learn --data " + path("flat.json") + " --out " + path("flat")) == 3);
  put("nopairs.json", R"({"x0": 0, "dx": 0.1, "count": 5, "pairs": []})");
  CHECK(run("learn --data " + path("nopairs.json") + " --out " + path("flat")) == 3);
}

TEST_CASE("numerical failures exit with 4") {
  // dt far beyond the stability bound of the default bump kernel
  put("unstable.json", R"({"dx": 0.05, "dt": 1.0, "b": 5, "T": 1})");
  fs::create_directories(work() / "wave");
  CHECK(run("wave-sim --config " + path("unstable.json") + " --out " + path("wave")) == 4);
}

TEST_CASE("wave simulation and learning") {
  put("wave.json", R"({"dx": 0.1, "dt": 0.05, "b": 8, "T": 1, "loadings": [{"type": 1, "j": [1, 2]}],
                       "learn": {"regularizer": "rkhs"}})");
  fs::create_directories(work() / "wsim");
  REQUIRE(run("wave-sim --config " + path("wave.json") + " --out " + path("wsim")) == 0);
  for (const char* f : {"dataset.json", "trajectory.csv", "dispersion_true.svg"}) CHECK_MESSAGE(fs::exists(work() / "wsim" / f), f);
  fs::create_directories(work() / "wlearn");
  REQUIRE(run("wave-learn --data " + path("wsim/dataset.json") + " --config " + path("wave.json") + " --out " +
              path("wlearn")) == 0);
  CHECK(fs::exists(work() / "wlearn" / "dispersion.csv"));
  CHECK(slurp(work() / "last.log").find("stable") != std::string::npos);
}

TEST_CASE("sweep and plot") {
  put("sweep.json", R"({"kernel": "gaussian", "half_width": 10, "dx_ladder": [0.2, 0.1], "nsr_ladder": [0],
                        "replicates": 1, "ladder_size": 3})");
  REQUIRE(run("sweep --config " + path("sweep.json") + " --regularizer rkhs --seed 4 --out " + path("sweep")) == 0);
  const std::string records = slurp(work() / "sweep" / "records.csv");
  CHECK(records.find("rkhs") != std::string::npos);
  CHECK(records.find(",L2,") == std::string::npos);
  fs::create_directories(work() / "plots");
  REQUIRE(run("plot --records " + path("sweep/records.csv") + " --out " + path("plots")) == 0);
  bool svg = false;
  for (const auto& e : fs::directory_iterator(work() / "plots")) svg |= e.path().extension() == ".svg";
  CHECK(svg);
}
