#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kSpecs = SQUEEZE_SPECS;

struct Scratch {
  fs::path dir = fs::temp_directory_path() / ("squeeze_cli_" + std::to_string(::getpid()));
  Scratch() { fs::create_directories(dir); }
  ~Scratch() { fs::remove_all(dir); }
};

int run(const std::string& args) {
  const std::string line = std::string(SQUEEZE_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(line.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::string spec(const char* name) { return (kSpecs / name).string(); }

}  // namespace

TEST_CASE("estimate on the unit disc") {
  Scratch s;
  const auto out = s.dir / "e.json";
  REQUIRE(run("estimate --spec " + spec("unit_disc.json") + " --point 0.3,0 --out " + out.string()) == 0);
  const json j = read_json(out);
  CHECK(j["status"] == "ok");
  CHECK(j["lower_bound"].get<double>() >= 1 - 1e-8);
  CHECK(j["competitor"]["tag"] == "riemann");
}

TEST_CASE("theorem1 on E_2") {
  Scratch s;
  const auto out = s.dir / "t.json";
  REQUIRE(run("theorem1 --spec " + spec("E2.json") + " --out " + out.string()) == 0);
  const json j = read_json(out);
  CHECK(j["bound"].get<double>() >= 0.5 - 1e-6);
  CHECK(j["matrix_floor"].get<double>() == doctest::Approx(1 / (32 * std::sqrt(2.0))));
  CHECK(j["floor"].get<double>() == doctest::Approx(1 / (64 * std::sqrt(2.0))));
  CHECK(j["validation"]["passed"] == true);
}

TEST_CASE("boundary report on the annulus") {
  Scratch s;
  const auto out = s.dir / "b.csv";
  REQUIRE(run("boundary-report --spec " + spec("annulus.json") + " --a 1,0 --alpha 1 --K 4 --out " + out.string()) == 0);
  std::istringstream csv(slurp(out));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "delta,s_lb,ratio,alpha,cap");
  int rows = 0;
  double max_ratio = 0;
  while (std::getline(csv, line)) {
    CHECK(line.find('\r') == std::string::npos);
    double delta, s_lb, ratio;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &delta, &s_lb, &ratio) == 3);
    max_ratio = std::max(max_ratio, ratio);
    ++rows;
  }
  CHECK(rows == 4);
  CHECK(max_ratio <= 5.0 / 3 + 0.05);
  const json j = read_json(s.dir / "b.json");
  CHECK(j["rows"].size() == 4);
}

TEST_CASE("exit codes") {
  Scratch s;
  const std::string out = " --out " + (s.dir / "x.json").string();
  CHECK(run("estimate --spec " + (s.dir / "missing.json").string() + " --point 0,0" + out) == 1);
  CHECK(run("estimate --spec " + spec("unit_disc.json") + out) == 1);  // no --point
  CHECK(run("boundary-report --spec " + spec("annulus.json") + " --a 1,0 --K 7" + out) == 1);
  CHECK(run("boundary-report --spec " + spec("annulus.json") + " --a 1,0 --alpha 0" + out) == 1);
  CHECK(run("theorem1 --spec " + spec("unit_disc.json") + out) == 1);
  CHECK(run("launch --spec " + spec("unit_disc.json") + out) == 1);

  {
    std::ofstream bad(s.dir / "bad.json");
    bad << R"({"schema": 1, "kind": "disc", "center": [0, 0], "radius": 1, "extra": true})";
  }
  CHECK(run("verify --spec " + (s.dir / "bad.json").string() + out) == 1);

  CHECK(run("estimate --spec " + spec("unit_disc.json") + " --point 1.5,0" + out) == 2);
  const json j = read_json(s.dir / "x.json");
  CHECK(j["status"] == "failure");
  CHECK(j.contains("reason"));
  CHECK(j["witness"][0][0] == 1.5);

  // projection that omits the origin fails validation
  {
    std::ofstream bad(s.dir / "shifted.json");
    bad << R"({"schema": 1, "kind": "cconvex", "n": 2, "base": {"kind": "l1_ball"},
      "T": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "A": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
      "projections": [{"kind": "disc", "center": [3, 0], "radius": 1},
                      {"kind": "disc", "center": [0, 0], "radius": 1}]})";
  }
  CHECK(run("verify --spec " + (s.dir / "shifted.json").string() + out) == 2);
  CHECK(read_json(s.dir / "x.json").contains("reason"));
}
