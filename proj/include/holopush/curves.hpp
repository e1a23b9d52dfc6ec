#pragma once

#include <string>
#include <vector>

#include "holopush/center.hpp"

namespace holopush {

// zeta -> H(x, zeta) for one fixed x, with the coefficients H_j(x) precomputed.
struct FiberPolynomial {
  CxPoint base;                 // f1(x)
  std::vector<CxPoint> coeffs;  // H_1(x)..H_N(x)

  static FiberPolynomial at(const CenterFamily& cf, Complex x);
  CxPoint operator()(Complex zeta) const;
  CxPoint derivative(Complex zeta) const;
};

// Radial-graph curves zeta = R(theta) e^{i theta} on one boundary component.
struct CurveComponent {
  Eigen::MatrixXd radii;         // K x A raw crossing radii
  Eigen::MatrixXcd log_fourier;  // K x (max_mode + 1): modes 0..max_mode of log R
  int max_mode = 0;
};

struct CurveFamily {
  int K = 0;
  int A = 0;
  std::vector<CurveComponent> components;
  double transversality_margin = 0.0;
  bool starlike_cert = false;
  double smoothing_residual = 0.0;  // max |log R_smoothed - log R| at grid angles
  double max_angular_slope = 0.0;   // max |dR/dtheta| on the grid
  int reentries = 0;                // angles where rho turns negative again before t = 0.95
  std::vector<std::string> warnings;

  double log_radius(int comp, int k, double theta) const;
  double log_radius_dtheta(int comp, int k, double theta) const;
  double max_radius() const;
  double min_radius() const;
};

inline constexpr double kCurveSearchLimit = 0.95;

CurveFamily detect_curves(const CenterFamily& cf, const DefiningFunction& df, int A);

Complex curve_point(const CurveFamily& cfam, int comp, int k, double theta);
inline Complex curve_point(const CurveFamily& cfam, int k, double theta) { return curve_point(cfam, 0, k, theta); }

// Builds a family directly from sampled radii (component-major), smoothing log R
// to modes <= A/8. Used by detect_curves and by tests with synthetic families.
CurveFamily curve_family_from_radii(std::vector<Eigen::MatrixXd> radii);

}  // namespace holopush
