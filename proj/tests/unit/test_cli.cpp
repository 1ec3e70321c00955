#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "toral/cli.hpp"

using namespace toral;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return "cli_test_" + name; }

}  // namespace

TEST_CASE("shell prints the points") {
  const auto r = call({"shell", "-d", "2", "--r2", "25"});
  CHECK(r.code == 0);
  int lines = 0;
  std::istringstream is(r.out);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') ++lines;
  CHECK(lines == 12);
  CHECK(r.out.find("points=12") != std::string::npos);
}

TEST_CASE("legendre pairs table") {
  const auto r = call({"legendre", "--pairs", "40"});
  CHECK(r.code == 0);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  int rows = 0;
  while (std::getline(is, line)) {
    int m = 0, n = 0;
    char g[16] = {0};
    REQUIRE(std::sscanf(line.c_str(), "%d,%d,%15s", &m, &n, g) == 3);
    const std::string expect = (m % 2 && n % 2) ? "x" : "1";
    CHECK(std::string(g) == expect);
    ++rows;
  }
  CHECK(rows == 40 * 39 / 2);
}

TEST_CASE("nodal lines of sin 2 pi x1 via the CLI") {
  const auto path = temp_path("sine.json");
  std::ofstream(path) << R"({"d":2,"r2":1,"coeffs":[{"xi":[1,0],"re":0,"im":-0.5},{"xi":[-1,0],"re":0,"im":0.5}]})";
  const auto r = call({"nodal", "--input", path, "-n", "32"});
  CHECK(r.code == 0);
  bool at0 = false, at_half = false;
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    double x = 0, y = 0;
    int k = 0, v = 0;
    std::sscanf(line.c_str(), "%d,%d,%lf,%lf", &k, &v, &x, &y);
    if (std::abs(x) < 1e-12) at0 = true;
    if (std::abs(x - 0.5) < 1e-12) at_half = true;
  }
  CHECK(at0);
  CHECK(at_half);
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  CHECK(call({"shell", "--r2", "25", "--bogus"}).code == 1);
  CHECK(call({}).code == 1);
  CHECK(call({"nosuch"}).code == 1);
  CHECK(call({"clusters", "--r2", "25", "--rho", "-1"}).code == 1);
  CHECK(call({"legendre"}).code == 1);
  CHECK(call({"shell", "--r2", "1000000", "-d", "4", "--visit-limit", "10"}).code == 2);
  CHECK(call({"--help"}).code == 0);
  const auto bad = call({"shell", "--frobnicate"});
  CHECK(bad.err.find("Usage") != std::string::npos);
}

TEST_CASE("config files fill unset flags") {
  const auto path = temp_path("cfg.json");
  std::ofstream(path) << R"({"r2": 25, "dim": 2})";
  const auto a = call({"shell", "--config", path});
  CHECK(a.code == 0);
  CHECK(a.out.find("points=12") != std::string::npos);
  const auto b = call({"shell", "--config", path, "--r2", "50"});
  CHECK(b.out.find("r2=50") != std::string::npos);
  std::ofstream(path) << R"({"nonsense": 1})";
  CHECK(call({"shell", "--config", path, "--r2", "5"}).code == 1);
  std::remove(path.c_str());
}

TEST_CASE("determinism of structured outputs") {
  const std::vector<std::vector<std::string>> cmds = {
      {"clusters", "--r2", "325", "--rho", "6"},
      {"meansquare", "--seed", "7"},
      {"laurent", "--r2", "25", "--seed", "3"},
      {"capflow", "--delta0", "0.08", "--delta1", "0.6", "--center", "1,0", "--u0", "0,1", "--probes", "500"},
  };
  for (const auto& c : cmds) {
    const auto a = call(c), b = call(c);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
}
