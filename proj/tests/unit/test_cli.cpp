#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "dynamo/cli.hpp"

using namespace dynamo;
using namespace dynamo::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dynamo_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// drops the timestamp line
std::string body(const fs::path& p) {
  const std::string s = slurp(p);
  return s.substr(s.find('\n') + 1);
}

std::vector<std::vector<std::string>> rows(const fs::path& p) {
  std::vector<std::vector<std::string>> out;
  std::istringstream is(slurp(p));
  for (std::string line; std::getline(is, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    out.push_back(cells);
  }
  return out;
}

int lab(const std::string& args) {
  const char* exe = std::getenv("DYNAMO_LAB");
  REQUIRE(exe != nullptr);
  const int rc = std::system((std::string(exe) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("config text parsing") {
  const auto kv = parse_config_text(
      "# experiment\n"
      "alpha = [8, 16 32]\n"
      "eps=1e-3, 1e-4   # two values\n"
      "grid-n = 128\n"
      "\n"
      "shear = zero\n");
  CHECK(kv.at("alpha") == "[8, 16 32]");
  CHECK(kv.at("grid_n") == "128");
  CHECK(kv.at("eps") == "1e-3, 1e-4");
  CHECK(kv.size() == 4);

  ExperimentConfig cfg;
  cli::apply(cfg, kv);
  CHECK(cfg.alpha == std::vector<int>{8, 16, 32});
  CHECK(cfg.eps == std::vector<double>{1e-3, 1e-4});
  CHECK(cfg.grid_n == 128);
  CHECK(cfg.shear == "zero");
  CHECK_NOTHROW(cfg.validate());

  CHECK_THROWS_AS(parse_config_text("alpha 8\n"), ConfigError);
  ExperimentConfig c2;
  CHECK_THROWS_AS(cli::apply(c2, {{"colour", "red"}}), ConfigError);
  CHECK_THROWS_AS(cli::apply(c2, {{"grid_n", "12x"}}), ConfigError);
  CHECK_THROWS_AS(cli::apply(c2, {{"eps", "[1e-3"}}), ConfigError);
  CHECK_THROWS_AS(cli::apply(c2, {{"tol", "abc"}}), ConfigError);
  CHECK_THROWS_AS(read_config_file("/nonexistent/dynamo.cfg"), ConfigError);
}

TEST_CASE("validation") {
  auto bad = [](const KeyValues& kv) {
    ExperimentConfig c;
    cli::apply(c, kv);
    return c;
  };
  CHECK_NOTHROW(ExperimentConfig{}.validate());
  CHECK_THROWS_AS(bad({{"alpha", "7"}}).validate(), ConfigError);
  CHECK_THROWS_AS(bad({{"grid_n", "129"}}).validate(), ConfigError);
  CHECK_THROWS_AS(bad({{"eps", "-1"}}).validate(), ConfigError);
  CHECK_THROWS_AS(bad({{"shear", "spiral"}}).validate(), ConfigError);
  CHECK_THROWS_AS(bad({{"sigma", "0.1"}}).validate(), ConfigError);
  CHECK_THROWS_AS(bad({{"periods", "1"}}).validate(), ConfigError);
  CHECK_THROWS_AS(bad({{"tol", "0"}}).validate(), ConfigError);
}

TEST_CASE("canonical form and hash") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");

  ExperimentConfig a, b;
  CHECK(a.hash() == b.hash());
  b.out_dir = "/elsewhere";
  b.plots = true;
  CHECK(a.hash() == b.hash());
  b.eps = {1e-4};
  CHECK(a.hash() != b.hash());
  const std::string c = a.canonical();
  CHECK(c.find("alpha = 16\n") != std::string::npos);
  CHECK(c.find("out_dir") == std::string::npos);
  // keys come out sorted
  CHECK(c.find("alpha") < c.find("band"));
  CHECK(c.find("sigma") < c.find("tol"));
  ExperimentConfig d;
  cli::apply(d, parse_config_text(a.canonical()));
  CHECK(d.hash() == a.hash());
}

TEST_CASE("csv writer") {
  const fs::path dir = scratch("csv");
  ExperimentConfig cfg;
  {
    CsvWriter w(dir / "sub" / "t.csv", cfg, "demo");
    w.header({"x", "y", "z"});
    w.cell(0.1).cell(3).cell(std::string("a,b"));
    w.end_row();
  }
  std::istringstream is(slurp(dir / "sub" / "t.csv"));
  std::string l1, l2, l3, l4;
  std::getline(is, l1);
  std::getline(is, l2);
  std::getline(is, l3);
  std::getline(is, l4);
  CHECK(l1.rfind("# generated ", 0) == 0);
  CHECK(l1.back() == 'Z');
  CHECK(l2 == "# command demo config_hash " + hex64(cfg.hash()));
  CHECK(l3 == "x,y,z");
  CHECK(l4 == "0.10000000000000001,3,\"a,b\"");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("svg rendering") {
  const fs::path dir = scratch("svg");
  write_svg_plot(dir / "p.svg", "t", "x", "y", {{"s", {1, 2, 3}, {1, 4, 9}}});
  const std::string s = slurp(dir / "p.svg");
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("polyline") != std::string::npos);
}

TEST_CASE("binary: map-check") {
  const fs::path dir = scratch("map");
  CHECK(lab("map-check --out " + dir.string()) == 0);
  const auto r = rows(dir / "map_check.csv");
  REQUIRE(r.size() > 1);
  CHECK(r[0] == std::vector<std::string>{"check", "alpha", "grid_n", "count", "failures", "worst", "status"});
  for (std::size_t k = 1; k < r.size(); ++k) CHECK(r[k].back() != "fail");

  const auto t0 = std::chrono::steady_clock::now();
  CHECK(lab("map-check --alpha 2 --grid-n 64 --out " + dir.string()) == 0);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 1.0);

  CHECK(lab("map-check --grid-n 129 --out " + dir.string()) == 2);
  CHECK(lab("map-check --alpha 3 --out " + dir.string()) == 2);
  CHECK(lab("map-check --no-such-flag") == 2);
  CHECK(lab("--help") == 0);
}

TEST_CASE("binary: eigen above the threshold") {
  const fs::path dir = scratch("eigen");
  CHECK(lab("eigen --alpha 16 --eps 1e-3 --grid-n 128 --plots --out " + dir.string()) == 0);
  const auto r = rows(dir / "eigen.csv");
  REQUIRE(r.size() == 2);
  CHECK(std::stod(r[1][5]) >= 0.125);
  CHECK(r[1][8] == "1");
  CHECK(fs::exists(dir / "eigen.svg"));
}

TEST_CASE("binary: evolve without shear decays") {
  const fs::path dir = scratch("evolve");
  CHECK(lab("evolve --alpha 8 --eps 1e-2 --grid-n 64 --shear zero --periods 12 --out " + dir.string()) == 0);
  const auto r = rows(dir / "evolve.csv");
  REQUIRE(r.size() == 2);
  CHECK(std::stod(r[1][3]) < 0.0);
  CHECK(rows(dir / "evolve_trace.csv").size() == 14);
}

TEST_CASE("binary: converge is monotone and reruns are identical") {
  const fs::path d1 = scratch("conv1"), d2 = scratch("conv2");
  const std::string args = "converge --alpha 8 16 32 --grid-n 512 --out ";
  CHECK(lab(args + d1.string()) == 0);
  CHECK(lab(args + d2.string()) == 0);
  const auto r = rows(d1 / "converge.csv");
  REQUIRE(r.size() == 4);
  for (std::size_t k = 2; k < r.size(); ++k) CHECK(std::stod(r[k][1]) < std::stod(r[k - 1][1]));
  CHECK(body(d1 / "converge.csv") == body(d2 / "converge.csv"));
}

TEST_CASE("binary: precedence of config, environment and flags") {
  const fs::path dir = scratch("prec");
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "alpha = 4\ngrid_n = 32\nout_dir = " << (dir / "from_file").string() << "\n";
  CHECK(lab("map-check -c " + cfg.string()) == 0);
  CHECK(rows(dir / "from_file" / "map_check.csv")[1][1] == "4");

  CHECK(lab("map-check -c " + cfg.string() + " --alpha 6") == 0);
  CHECK(rows(dir / "from_file" / "map_check.csv")[1][1] == "6");

  const std::string env = "DYNAMO_OUT_DIR=" + (dir / "from_env").string() + " ";
  const char* exe = std::getenv("DYNAMO_LAB");
  REQUIRE(exe != nullptr);
  CHECK(std::system((env + exe + " map-check -c " + cfg.string() + " > /dev/null 2>&1").c_str()) == 0);
  CHECK(fs::exists(dir / "from_env" / "map_check.csv"));
  CHECK(std::system((env + exe + " map-check -c " + cfg.string() + " --out " + (dir / "from_flag").string() +
                     " > /dev/null 2>&1")
                        .c_str()) == 0);
  CHECK(fs::exists(dir / "from_flag" / "map_check.csv"));

  std::ofstream(dir / "bad.cfg") << "alpha = 8\nwobble = 1\n";
  CHECK(lab("map-check -c " + (dir / "bad.cfg").string()) == 2);
  fs::remove_all(dir.parent_path());
}
