#include "holopush/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "holopush/config.hpp"
#include "holopush/error.hpp"
#include "holopush/figures.hpp"
#include "holopush/pipeline.hpp"

namespace holopush {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const char* kOutputs[] = {"config.echo.json", "report.json", "solver_trace.csv", "curves.csv", "boundary.csv", "map.json"};

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cli.write", "cannot write " + path.string());
  out << body;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string trace_csv(const std::vector<RHTraceRow>& trace) {
  std::string out = "row,iteration,defect,lambda,step\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out += std::to_string(i) + ',' + std::to_string(trace[i].iteration) + ',' + g17(trace[i].defect) + ',' +
           g17(trace[i].lambda) + ',' + trace[i].step + '\n';
  return out;
}

std::string curves_csv(const CurveFamily& cfam) {
  std::string out = "component,k,a,theta,radius\n";
  for (std::size_t c = 0; c < cfam.components.size(); ++c) {
    const Eigen::MatrixXd& R = cfam.components[c].radii;
    for (long k = 0; k < R.rows(); ++k)
      for (long a = 0; a < R.cols(); ++a)
        out += std::to_string(c) + ',' + std::to_string(k) + ',' + std::to_string(a) + ',' +
               g17(2.0 * std::numbers::pi * a / R.cols()) + ',' + g17(R(k, a)) + '\n';
  }
  return out;
}

std::string boundary_csv(const MapData& map, const DefiningFunction& df) {
  const int n = map.cf.dimension();
  std::string out = "component,k,s,rho,zeta_abs";
  for (int i = 0; i < n; ++i) out += ",f" + std::to_string(i) + "_re,f" + std::to_string(i) + "_im";
  out += '\n';
  for (int c = 0; c < map.surface.components(); ++c)
    for (int k = 0; k < map.surface.K; ++k) {
      const Complex x = map.surface.boundary_point(c, k);
      const Eigen::VectorXcd z = map.eval(x);
      out += std::to_string(c) + ',' + std::to_string(k) + ',' + g17(2.0 * std::numbers::pi * k / map.surface.K) + ',' +
             g17(df.in_box(z) ? df.rho(z) : std::numeric_limits<double>::infinity()) + ',' +
             g17(std::abs(map.zeta.eval(x)));
      for (int i = 0; i < n; ++i) out += ',' + g17(z[i].real()) + ',' + g17(z[i].imag());
      out += '\n';
    }
  return out;
}

json error_report(const Error& e) {
  ProperMapReport rep;
  rep.error = e;
  return rep.to_json();
}

int exit_code(const ProperMapReport& rep) {
  if (rep.error) return kExitStage;
  return rep.all_pass() ? kExitPass : kExitClause;
}

void log_error(std::ostream& log, const Error& e) {
  log << "error [" << to_string(e.kind()) << "] at " << e.stage() << ": " << e.what() << '\n';
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& out_dir, const std::vector<std::string>& overrides,
            std::ostream& log) {
  const fs::path out(out_dir);
  try {
    fs::create_directories(out);
  } catch (const fs::filesystem_error& e) {
    log << "error [IoError] at cli.run: " << e.what() << '\n';
    return kExitStage;
  }
  for (const char* name : kOutputs) fs::remove(out / name);
  fs::remove_all(out / "figures");

  RunConfig cfg;
  try {
    json raw = read_json_file(config_path);
    for (const auto& o : overrides) apply_override(raw, o);
    cfg = parse_config(raw);
  } catch (const Error& e) {
    log_error(log, e);
    try {
      write_json(out / "report.json", error_report(e));
    } catch (const Error&) {
    }
    return kExitStage;
  }

  try {
    const PipelineResult res = run_pipeline(cfg);
    write_json(out / "config.echo.json", config_to_json(res.config));
    write_json(out / "report.json", res.report.to_json());
    write_text(out / "solver_trace.csv", trace_csv(res.trace));
    if (res.curves) write_text(out / "curves.csv", curves_csv(*res.curves));
    if (res.map) {
      const auto df = res.config.domain.make();
      write_text(out / "boundary.csv", boundary_csv(*res.map, *df));
      write_json(out / "map.json", map_to_json(*res.map));
    }
    const int code = exit_code(res.report);
    if (res.report.error) log_error(log, *res.report.error);
    if (code == kExitPass) write_figures(out.string());
    log << "status " << res.report.to_json()["status"].get<std::string>() << ", outputs in " << out.string() << '\n';
    return code;
  } catch (const Error& e) {
    log_error(log, e);
    write_json(out / "report.json", error_report(e));
    return kExitStage;
  }
}

int cmd_verify(const std::string& map_path, const std::string& config_path, std::ostream& out, std::ostream& log) {
  try {
    RunConfig cfg = parse_config(read_json_file(config_path));
    const MapData map = map_from_json(read_json_file(map_path));
    if (map.cf.dimension() != cfg.domain.dimension)
      throw Error(ErrorKind::Schema, "cli.verify", "map dimension does not match the config domain");
    if (map.surface.kind != cfg.surface.kind)
      throw Error(ErrorKind::Schema, "cli.verify", "map surface does not match the config surface");
    const auto df = cfg.domain.make();
    materialize_defaults(cfg, *df);
    const ProperMapReport rep = verify_map(map, cfg, *df);
    out << rep.to_json().dump(2) << '\n';
    return exit_code(rep);
  } catch (const Error& e) {
    log_error(log, e);
    return kExitStage;
  }
}

int cmd_figures(const std::string& dir, std::ostream& log) {
  try {
    for (const auto& name : write_figures(dir)) log << "wrote figures/" << name << '\n';
    return kExitPass;
  } catch (const Error& e) {
    log_error(log, e);
    return kExitStage;
  } catch (const fs::filesystem_error& e) {
    log << "error [IoError] at cli.figures: " << e.what() << '\n';
    return kExitStage;
  }
}

}  // namespace holopush
