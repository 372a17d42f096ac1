#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "roughstart/config.hpp"

using namespace roughstart;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("roughstart_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path config_path(const std::string& name) { return fs::path(ROUGHSTART_SOURCE_DIR) / "configs" / name; }

int run_text(const std::string& toml, const fs::path& out_dir, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  ExperimentConfig c;
  try {
    c = parse_config(toml);
  } catch (const ValidationError& e) {
    if (err_text) *err_text = e.what();
    return 2;
  }
  c.output_dir = out_dir.string();
  const int rc = run(c, out, err);
  if (err_text) *err_text = err.str();
  return rc;
}

int cli(const std::string& args) {
  const char* exe = std::getenv("ROUGHSTART_CLI");
  REQUIRE(exe != nullptr);
  const std::string cmd = std::string("\"") + exe + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("golden table text and json") {
  const auto rows = golden_table();
  REQUIRE(rows.size() == 4);
  CHECK(rows[2].kind == EquationKind::ks);
  CHECK(rows[2].delta == Rational(1, 4));
  CHECK(rows[2].r_threshold_fix1 == Rational(-1));
  CHECK(rows[2].critical_space == "C^-2");
  const auto j = golden_table_json(rows);
  CHECK(j.size() == 4);
  CHECK(golden_table_text(rows).find("ks") != std::string::npos);
}

TEST_CASE("parsing rejects unknown keys and exponent overrides") {
  CHECK_THROWS_AS(parse_config("command = \"classify\"\nbogus = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[equation]\nkind = \"ks\"\ntau = 4\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[solver]\nformulation = \"fix9\"\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("this is not toml ["), ValidationError);
  const auto c = parse_config("[equation]\nkind = \"generic\"\ntau = \"7/2\"\na = 1\nb = 0.25\n");
  REQUIRE(c.equation);
  CHECK(c.equation->spec.tau == Rational(7, 2));
  CHECK(c.equation->spec.b == Rational(1, 4));
}

TEST_CASE("missing sections map to exit code 2") {
  const auto dir = scratch_dir("missing");
  std::string err;
  CHECK(run_text("command = \"solve\"\nseed = 1\n[equation]\nkind = \"burgers\"\n[solver]\n", dir, &err) == 2);
  CHECK(err.find("[ic]") != std::string::npos);
  CHECK(run_text("command = \"blowup\"\n[blowup]\nK_max = 100\n", dir, &err) == 2);
  CHECK(err.find("seed") != std::string::npos);
}

TEST_CASE("every example config parses") {
  for (const auto& e : fs::directory_iterator(fs::path(ROUGHSTART_SOURCE_DIR) / "configs")) {
    CAPTURE(e.path().string());
    ExperimentConfig c;
    CHECK_NOTHROW(c = load_config(e.path().string()));
    CHECK(c.command.has_value());
    CHECK_NOTHROW(require_sections(c));
  }
}

TEST_CASE("classify writes the golden table and a manifest") {
  const auto dir = scratch_dir("classify");
  CHECK(run_text("command = \"classify\"\n", dir) == 0);
  CHECK(fs::exists(dir / "classify.txt"));
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["csv_schema"] == csv_schema_version);
  CHECK(m["versions"].contains("fftw"));
  CHECK(m["config"]["command"] == "classify");
}

TEST_CASE("classify for a single equation") {
  const auto dir = scratch_dir("classify_one");
  CHECK(run_text("command = \"classify\"\n[equation]\nkind = \"burgers\"\ntheta = \"1/2\"\n", dir) == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "classify.json"));
  CHECK(j["delta"] == "1/2");
}

TEST_CASE("solve from the Burgers example converges") {
  const auto dir = scratch_dir("solve");
  auto c = load_config(config_path("burgers_fix1.toml").string());
  c.output_dir = dir.string();
  std::ostringstream out, err;
  CHECK(run(c, out, err) == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "solve.json"));
  CHECK(j["converged"] == true);
  CHECK(slurp(dir / "iterates.csv").rfind("# schema 1\n", 0) == 0);
  CHECK(fs::exists(dir / "u_T.json"));
}

TEST_CASE("non-convergence maps to exit code 3") {
  const auto dir = scratch_dir("diverge");
  const std::string toml =
      "command = \"solve\"\n[equation]\nkind = \"burgers\"\n[ic]\ntype = \"sine\"\namplitude = 1e6\nN = 16\n"
      "[solver]\nT = 1.0\nmax_halvings = 0\nmax_iter = 20\n";
  CHECK(run_text(toml, dir) == 3);
}

TEST_CASE("command line: exit codes and determinism") {
  const auto a = scratch_dir("cli_a"), b = scratch_dir("cli_b");
  CHECK(cli("asymptotics --out " + a.string()) == 0);
  CHECK(fs::exists(a / "asymptotics.csv"));
  const std::string sample = "--config " + config_path("sample.toml").string();
  CHECK(cli(sample + " --threads 1 --out " + a.string() + " sample") == 0);
  CHECK(cli(sample + " --threads 2 --out " + b.string() + " sample") == 0);
  CHECK(slurp(a / "sample_0.json") == slurp(b / "sample_0.json"));
  CHECK(cli(sample + " --seed 12 --out " + b.string() + " sample") == 0);
  CHECK(slurp(a / "sample_0.json") != slurp(b / "sample_0.json"));
  // sample without a seed
  CHECK(cli("--out " + a.string() + " sample") == 2);
  CHECK(cli("--config /nonexistent/file.toml classify") == 2);
  CHECK(cli("frobnicate") != 0);
}
