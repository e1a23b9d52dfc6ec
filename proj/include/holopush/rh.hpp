#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holopush/curves.hpp"
#include "holopush/fourier.hpp"

namespace holopush {

struct DivisorPoint {
  Complex location;
  int order = 1;
};

// Effective divisor sum order_i [a_i] on the surface.
struct Divisor {
  std::vector<DivisorPoint> points;

  int total_degree() const;
  int order_at(Complex a) const;
  // Raises the order at a to at least `order` (adds the point if absent).
  Divisor with_min_order(Complex a, int order) const;
  void validate(const SurfaceSpec& surface) const;
};

struct BlaschkeBoundary {
  Eigen::VectorXcd values;  // B(e^{i s_k})
  Eigen::VectorXd arg;      // continuous lift of arg B, arg - w s is periodic
  int winding = 0;
};

BlaschkeBoundary blaschke_boundary(const Divisor& div, int K);

struct RHTraceRow {
  int iteration = 0;
  double defect = 0.0;
  double lambda = 0.0;
  std::string step;  // "picard" or "newton"
};

struct RHOptions {
  double tol = 1e-10;
  int max_iter = 200;
  double lambda0 = 0.5;
  double lambda_floor = 1.0 / 64.0;
  double newton_switch = 0.1;
  std::vector<RHTraceRow>* trace = nullptr;  // appended live, survives failures
  const Eigen::VectorXd* initial_offset = nullptr;  // periodic, added to the initial guess w s
};

// zeta = (zero factor) * exp(Phi). On the disc the zero factor is the finite
// Blaschke product of the divisor; on the annulus it is x^m (x - t)^[has_zero].
struct RHSolution {
  SurfaceKind kind = SurfaceKind::Disc;
  int K = 0;
  double inner_radius = 0.0;

  Divisor divisor;                      // disc
  int monomial_order = 0;               // annulus: m
  std::optional<double> annulus_zero;   // annulus: t in (r, 1)
  LaurentSeries zerofree_log;           // Phi

  std::vector<Eigen::VectorXd> theta;   // boundary angle per component
  LaurentSeries coeffs;                 // Laurent/Taylor coefficients of zeta

  double defect = 0.0;             // final sup |d|
  double residual = 0.0;           // sup radial distance of the boundary trace to the curves
  double holomorphy_defect = 0.0;  // max |negative Fourier mode| of the trace over the zero factor
  double period_residual = 0.0;    // annulus only
  int winding_defect = 0;
  int iterations = 0;
  std::vector<RHTraceRow> trace;

  Complex zero_factor(Complex x) const;
  Complex eval(Complex x) const;
};

// Rebuilds the coefficient series of zeta from its factorization.
LaurentSeries zeta_coefficients(const RHSolution& sol);

RHSolution solve_rh(const CurveFamily& cfam, const Divisor& div, const RHOptions& opts = {});

// Annulus r < |x| < 1 with independent curve families on |x| = 1 (component 0)
// and |x| = r (component 1).
RHSolution solve_rh_annulus(const CurveFamily& cfam, double inner_radius, const RHOptions& opts = {});

struct SmallnessResult {
  Divisor divisor;
  int predicted_order = 0;
  RHSolution solution;
  std::vector<std::pair<int, double>> history;  // (order at 0, sup over compact of |zeta|)
};

// Sup of |zeta| over a polar grid of the closed disc of radius `radius`.
double sup_on_disc(const RHSolution& sol, double radius, int radial = 64, int angular = 64);

// Adds zeros at 0 until sup_{|x| <= compact_radius} |zeta| < eps.
SmallnessResult smallness_by_zeros_solved(const CurveFamily& cfam, const Divisor& base, double compact_radius,
                                          double eps, const RHOptions& opts = {});
inline Divisor smallness_by_zeros(const CurveFamily& cfam, const Divisor& base, double compact_radius, double eps,
                                  const RHOptions& opts = {}) {
  return smallness_by_zeros_solved(cfam, base, compact_radius, eps, opts).divisor;
}

// Order predicted by |zeta(x)| <= max R |x|^w; 0 when eps >= max R.
int predicted_zero_order(double max_radius, double compact_radius, double eps);

nlohmann::json rh_factorization_to_json(const RHSolution& sol);
RHSolution rh_factorization_from_json(const nlohmann::json& j);

}  // namespace holopush
