#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "holopush/config.hpp"
#include "holopush/curves.hpp"
#include "holopush/error.hpp"
#include "holopush/rh.hpp"

namespace holopush {

// f = H(., zeta(.)) = f1 + sum_j H_j zeta^j, stored both as the factors and as
// composed coefficients.
struct MapData {
  SurfaceSpec surface;
  CenterFamily cf;  // f1 and the surrogate H_j
  RHSolution zeta;
  LaurentMap f;

  Eigen::VectorXcd eval(Complex x) const { return f.eval(x); }
  Eigen::VectorXcd derivative(Complex x) const { return f.derivative(x); }
  // Pointwise H(x, zeta(x)), independent of the composed coefficients.
  Eigen::VectorXcd eval_factors(Complex x) const;
};

// Coefficients of f1 + sum_j H_j zeta^j.
LaurentMap compose(const CenterFamily& cf, const LaurentSeries& zeta);

MapData make_map(CenterFamily cf, RHSolution zeta);

nlohmann::json map_to_json(const MapData& map);
// Throws Error(Schema, "pipeline.load", ...) on malformed or empty dumps.
MapData map_from_json(const nlohmann::json& dump);

enum class ClauseStatus { Pass, Fail, NotClaimed, NotEvaluated };
std::string_view to_string(ClauseStatus s);

struct Clause {
  std::string name;
  ClauseStatus status = ClauseStatus::NotEvaluated;
  std::string field;  // report field deciding the clause
  std::string detail;
};

struct JetError {
  Complex point;
  int order = 0;
  double error = 0.0;
};

struct ImmersionAudit {
  double immersion_margin = 0.0;
  double injectivity_audit = 0.0;  // min image distance over pairs with parameter distance > separation
  double separation = 0.0;
  int grid_points = 0;
  std::vector<std::string> recommendations;
};

struct ProperMapReport {
  double boundary_residual = 0.0;
  double interior_negativity = 0.0;  // max rho o f over the interior grid
  double approx_error = 0.0;
  std::vector<JetError> jet_errors;
  double hopf_margin = 0.0;
  double hopf_floor = 0.0;
  double immersion_margin = 0.0;
  double injectivity_audit = 0.0;
  double composition_defect = 0.0;
  double max_zeta_interior = 0.0, max_zeta_boundary = 0.0;
  double max_rho_interior = 0.0, max_rho_boundary = 0.0;
  std::vector<Clause> clauses;
  std::vector<std::string> recommendations;
  std::vector<std::string> warnings;

  // Filled by run_pipeline.
  nlohmann::json run_info = nlohmann::json::object();
  std::optional<Error> error;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

ImmersionAudit immersion_audit(const MapData& map, const RunConfig& cfg);

// Never throws on numerical grounds; clause failures are recorded in the report.
ProperMapReport verify_map(const MapData& map, const RunConfig& cfg, const DefiningFunction& df);

struct PipelineResult {
  RunConfig config;  // with materialized defaults
  std::optional<MapData> map;
  std::optional<CurveFamily> curves;
  std::vector<RHTraceRow> trace;
  ProperMapReport report;
};

// Stage errors are caught and stored in report.error; the partial state is kept.
PipelineResult run_pipeline(const RunConfig& cfg);

}  // namespace holopush
