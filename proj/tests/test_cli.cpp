#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "holopush/cli.hpp"
#include "holopush/config.hpp"
#include "holopush/figures.hpp"

using namespace holopush;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) { return std::string(HOLOPUSH_FIXTURES) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("holopush_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Runs the ball fixture once into a fixed directory.
const fs::path& ball_dir() {
  static const fs::path dir = [] {
    const fs::path d = scratch("ball");
    std::ostringstream log;
    REQUIRE(cmd_run(fixture("ball.json"), d.string(), {}, log) == kExitPass);
    return d;
  }();
  return dir;
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("run writes the full layout") {
  const fs::path& d = ball_dir();
  for (const char* f : {"config.echo.json", "report.json", "solver_trace.csv", "curves.csv", "boundary.csv", "map.json"})
    CHECK(fs::exists(d / f));
  for (const char* f : {"boundary_residual.svg", "curves_heatmap.svg", "image_projections.svg"})
    CHECK(fs::exists(d / "figures" / f));
  const json rep = read_json_file((d / "report.json").string());
  CHECK(rep["status"] == "pass");
  CHECK(rep["error"].is_null());
  CHECK(rep["metrics"]["boundary_residual"].get<double>() <= 1e-6);
  CHECK(slurp(d / "solver_trace.csv").rfind("row,iteration,defect,lambda,step\n", 0) == 0);
  const CsvTable curves = read_csv((d / "curves.csv").string());
  CHECK(curves.rows.size() == 256u * 256u);
}

TEST_CASE("echo reproduces the effective config") {
  const json echo = read_json_file((ball_dir() / "config.echo.json").string());
  CHECK(config_to_json(parse_config(echo)) == echo);
  CHECK(echo["collar"]["rho_lo"].get<double>() == doctest::Approx(-0.25));
  CHECK(echo["surrogate"]["d_plus"] == 64);
}

TEST_CASE("repeated runs are byte-identical") {
  const fs::path d = scratch("ball_again");
  std::ostringstream log;
  REQUIRE(cmd_run(fixture("ball.json"), d.string(), {}, log) == kExitPass);
  for (const char* f : {"report.json", "config.echo.json", "map.json", "boundary.csv", "curves.csv",
                        "figures/boundary_residual.svg", "figures/curves_heatmap.svg", "figures/image_projections.svg"})
    CHECK_MESSAGE(slurp(d / f) == slurp(ball_dir() / f), f);
}

TEST_CASE("stage and schema failures exit 1 with a report") {
  std::ostringstream log;
  const fs::path bad = scratch("eps");
  CHECK(cmd_run(fixture("ball.json"), bad.string(), {"eps=0"}, log) == kExitStage);
  CHECK(log.str().find("eps") != std::string::npos);
  const json rep = read_json_file((bad / "report.json").string());
  CHECK(rep["error"]["kind"] == "SchemaError");
  CHECK(rep["error"]["message"].get<std::string>().rfind("eps", 0) == 0);

  const fs::path collar = scratch("collar");
  CHECK(cmd_run(fixture("collar_violation.json"), collar.string(), {}, log) == kExitStage);
  const json crep = read_json_file((collar / "report.json").string());
  CHECK(crep["error"]["stage"] == "pipeline.collar");
  CHECK(!fs::exists(collar / "figures"));

  const fs::path missing = scratch("missing");
  CHECK(cmd_run("/nonexistent/config.json", missing.string(), {}, log) == kExitStage);
  CHECK(read_json_file((missing / "report.json").string())["error"]["kind"] == "IoError");
}

TEST_CASE("clause failure exits 2 without figures") {
  std::ostringstream log;
  const fs::path d = scratch("tight");
  // A boundary tolerance below the solver accuracy cannot be met.
  CHECK(cmd_run(fixture("ball.json"), d.string(), {"tolerances.boundary=1e-20"}, log) == kExitClause);
  CHECK(read_json_file((d / "report.json").string())["clauses"]["proper"]["status"] == "fail");
  CHECK(!fs::exists(d / "figures"));
  CHECK(fs::exists(d / "map.json"));
}

TEST_CASE("verify re-evaluates a stored map") {
  std::ostringstream out, log;
  CHECK(cmd_verify((ball_dir() / "map.json").string(), fixture("ball.json"), out, log) == kExitPass);
  const json fresh = json::parse(out.str());
  const json stored = read_json_file((ball_dir() / "report.json").string());
  for (const char* k : {"boundary_residual", "interior_negativity", "approx_error", "hopf_margin", "immersion_margin",
                        "injectivity_audit"})
    CHECK(std::abs(fresh["metrics"][k].get<double>() - stored["metrics"][k].get<double>()) <= 1e-12);
  CHECK(fresh["clauses"] == stored["clauses"]);

  std::ostringstream out2;
  cmd_verify((ball_dir() / "map.json").string(), fixture("ball.json"), out2, log);
  CHECK(out2.str() == out.str());
}

TEST_CASE("verify failures") {
  std::ostringstream out, log;
  const fs::path d = scratch("verify");
  fs::create_directories(d);

  json dump = read_json_file((ball_dir() / "map.json").string());
  dump["zeta"]["log_coeffs"]["re"][0] = dump["zeta"]["log_coeffs"]["re"][0].get<double>() + std::log(1.5);
  std::ofstream(d / "scaled.json") << dump.dump();
  CHECK(cmd_verify((d / "scaled.json").string(), fixture("ball.json"), out, log) == kExitClause);

  std::ofstream(d / "empty.json") << "{}";
  CHECK(cmd_verify((d / "empty.json").string(), fixture("ball.json"), out, log) == kExitStage);

  json cfg = read_json_file(fixture("ball.json"));
  cfg["domain"]["dimension"] = 3;
  std::ofstream(d / "cfg3.json") << cfg.dump();
  log.str("");
  CHECK(cmd_verify((ball_dir() / "map.json").string(), (d / "cfg3.json").string(), out, log) == kExitStage);
  CHECK(log.str().find("dimension") != std::string::npos);
}

TEST_CASE("figures regenerate deterministically") {
  std::ostringstream log;
  const fs::path d = scratch("figs");
  fs::create_directories(d);
  for (const char* f : {"boundary.csv", "curves.csv", "report.json"}) fs::copy_file(ball_dir() / f, d / f);
  CHECK(cmd_figures(d.string(), log) == kExitPass);
  for (const char* f : {"boundary_residual.svg", "curves_heatmap.svg", "image_projections.svg"})
    CHECK(slurp(d / "figures" / f) == slurp(ball_dir() / "figures" / f));
  int count = 0;
  for (const auto& e : fs::directory_iterator(d / "figures")) count += e.path().extension() == ".svg";
  CHECK(count == 3);

  const fs::path empty = scratch("empty");
  fs::create_directories(empty);
  CHECK(cmd_figures(empty.string(), log) == kExitStage);
}

TEST_CASE("command-line binary") {
  const std::string bin = HOLOPUSH_BIN;
  const fs::path empty = scratch("bin_empty");
  fs::create_directories(empty);
  CHECK(shell(bin + " figures --dir " + empty.string() + " 2>/dev/null") == 1);
  CHECK(shell(bin + " 2>/dev/null >/dev/null") == 1);
  const fs::path out = scratch("bin_collar");
  CHECK(shell("HOLOPUSH_THREADS=2 " + bin + " run --config " + fixture("collar_violation.json") + " --out " +
              out.string() + " 2>/dev/null") == 1);
  CHECK(shell(bin + " verify --map " + (ball_dir() / "map.json").string() + " --config " + fixture("ball.json") +
              " >/dev/null") == 0);
  const fs::path set = scratch("bin_set");
  CHECK(shell(bin + " run --config " + fixture("ball.json") + " --out " + set.string() +
              " --set eps=-1 2>/dev/null") == 1);
}
