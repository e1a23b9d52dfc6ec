#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "holopush/disc.hpp"
#include "holopush/laurent.hpp"

namespace holopush {

enum class SurfaceKind { Disc, Annulus };

struct SurfaceSpec {
  SurfaceKind kind = SurfaceKind::Disc;
  double inner_radius = 0.5;  // annulus only
  int K = 256;                // samples per boundary circle

  int components() const { return kind == SurfaceKind::Disc ? 1 : 2; }
  double component_radius(int c) const { return c == 0 ? 1.0 : inner_radius; }
  Complex boundary_point(int component, int k) const;
  // True for points of the closed surface (closed disc / closed annulus).
  bool contains(Complex x, double slack = 0.0) const;
  void validate() const;
};

// Boundary samples of h(x, .) = g_{f1(x), v(x)} and the holomorphic surrogate
//   H(x, zeta) = f1(x) + sum_{j=1}^N H_j(x) zeta^j.
struct CenterFamily {
  SurfaceSpec surface;
  int J = 24;
  // h_samples[component][j] is n x K: the zeta^j coefficient of h at each boundary sample.
  std::vector<std::vector<Eigen::MatrixXcd>> h_samples;
  LaurentMap f1;
  double scale = 1.0;

  std::vector<LaurentMap> surrogate;  // H_1..H_N
  int d_minus = 0;
  int d_plus = 0;
  double condition = 1.0;
  double report_radius = 0.9;
  double fit_error = 0.0;

  int dimension() const { return f1.dimension(); }
  int N() const { return static_cast<int>(surrogate.size()); }
  bool fitted() const { return !surrogate.empty(); }
};

// frames[c] is the frame over boundary component c.
CenterFamily sample_h(const DefiningFunction& df, const SurfaceSpec& surface, const std::vector<BoundaryFrame>& frames,
                      const LaurentMap& f1, double c, int J = 24);

// Adds amplitude * (smooth seeded pseudo-random holomorphic terms) to the zeta^2..zeta^4
// coefficients; h(x, 0) is untouched.
void perturb_h(CenterFamily& cf, double amplitude, std::uint64_t seed);

CenterFamily fit_surrogate(const CenterFamily& cf, int N, int d_minus, int d_plus);

// sup_k sum_j |H_j(x_k) - h_j(x_k)| r^j over all boundary samples.
double surrogate_fit_error(const CenterFamily& cf, double r);

Eigen::VectorXcd eval_H(const CenterFamily& cf, Complex x, Complex zeta);
// d/dzeta H(x, zeta)
Eigen::VectorXcd eval_H_dzeta(const CenterFamily& cf, Complex x, Complex zeta);

// Dump as a JSON array of {j, coordinate, exponent, re, im}; j = 0 rows carry f1.
nlohmann::json surrogate_to_json(const CenterFamily& cf);
// Rebuilds f1 and the H_j of a dump (no boundary samples).
CenterFamily surrogate_from_json(const nlohmann::json& dump, int dimension, const SurfaceSpec& surface);

}  // namespace holopush
