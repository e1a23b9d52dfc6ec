#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holopush/center.hpp"
#include "holopush/geometry.hpp"

namespace holopush {

struct DomainSpec {
  std::string preset = "ball";  // ball | ellipsoid | poly
  int dimension = 2;
  std::vector<double> radii;    // ellipsoid
  std::vector<Monomial> terms;  // poly
  double box_radius = 0.0;      // 0: preset default

  std::unique_ptr<DefiningFunction> make() const;
};

struct InterpolationPoint {
  Complex point;
  int order = 0;                         // derivatives 0..order must match
  std::vector<Eigen::VectorXcd> jet;     // optional target derivatives f^(0..order)(point)
};

struct DivisorEntry {
  Complex point;
  int order = 1;
};

struct RunConfig {
  SurfaceSpec surface;
  DomainSpec domain;
  LaurentMap f1;
  double compact_K = 0.5;
  double eps = 0.05;
  std::vector<InterpolationPoint> interp;
  std::vector<DivisorEntry> zeros;  // prescribed divisor D
  std::vector<DivisorEntry> poles;  // poles of H; their orders are added to the divisor

  double tol_fit = 1e-8;
  double tol_rh = 1e-10;
  double tol_boundary = 1e-6;
  int A = 256;
  int J = 24;
  int N = 12;
  int d_plus = -1;  // -1: K / 4
  int d_minus = 0;
  double report_radius = 0.9;
  std::optional<CollarBand> band;  // computed from the domain when absent
  int rh_max_iter = 200;
  double hopf_floor = 1e-4;  // multiple of lambda_min
  AdmissibilityMode admissibility = AdmissibilityMode::Strict;
  double pert_h = 1e-3;
  std::uint64_t seed = 1;
  bool experimental_annulus = false;
};

// Parses and validates; throws Error(Schema, "config", ...) naming the offending field.
RunConfig parse_config(const nlohmann::json& j);

// Fills every data-dependent default (collar band, d_plus) so that the echo is complete.
void materialize_defaults(RunConfig& cfg, const DefiningFunction& df);

nlohmann::json config_to_json(const RunConfig& cfg);

// Applies "a.b.c=value"; value is read as JSON when it parses, as a string otherwise.
void apply_override(nlohmann::json& j, const std::string& assignment);

nlohmann::json read_json_file(const std::string& path);

// Boundary samples of f1 on every component, component-major.
std::vector<CxPoint> f1_boundary_samples(const RunConfig& cfg);

// -min rho over the origin, a box lattice and the f1 samples: the depth scale of the collar band.
double domain_depth(const DefiningFunction& df, const std::vector<CxPoint>& f1_samples);

}  // namespace holopush
