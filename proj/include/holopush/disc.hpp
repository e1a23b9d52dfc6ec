#pragma once

#include <optional>
#include <vector>

#include "holopush/geometry.hpp"

namespace holopush {

inline constexpr int kTauDegree = 16;

// Holomorphic disc zeta -> z + c zeta v + tau(c zeta) u lying on the quadric
// W_z = z + {w : 2 grad.w + w^T S w = 0}, where S is the holomorphic Hessian at z.
struct QuadricDisc {
  CxPoint center;
  CxPoint direction;       // v, unit, grad.v = 0
  CxPoint transverse_dir;  // u = conj(grad)/|grad|
  double scale = 1.0;      // c
  Eigen::VectorXcd tau_coeffs;  // tau_0..tau_16, tau_0 = tau_1 = 0

  // Quadric data at the center.
  CxPoint quadric_grad;
  CxMatrix quadric_hess;

  Complex tau(Complex s) const;
  Complex tau_derivative(Complex s) const;

  CxPoint operator()(Complex zeta) const;
  CxPoint derivative(Complex zeta) const;

  // Coefficient of zeta^j in the power series of the disc.
  CxPoint coefficient(int j) const;

  // |2 grad.w + w^T S w| with w = g(zeta) - z.
  double quadric_residual(Complex zeta) const;
};

QuadricDisc build_disc(const DefiningFunction& df, const CxPoint& z, const CxPoint& v, double c,
                       const std::optional<CollarBand>& band = std::nullopt);

struct Crossing {
  double radius = 0.0;
  double transversality = 0.0;  // d/dt rho(g(t e^{i theta})) at the root
};

Crossing crossing(const DefiningFunction& df, const QuadricDisc& disc, double theta);

inline double crossing_radius(const DefiningFunction& df, const QuadricDisc& disc, double theta) {
  return crossing(df, disc, theta).radius;
}

// A unit vector in ker d rho(z), taken from the reference basis vector with the
// largest projection.
CxPoint default_tangent_direction(const DefiningFunction& df, const CxPoint& z);

double choose_scale(const DefiningFunction& df, const std::vector<CxPoint>& boundary_points, const CollarBand& band,
                    const std::vector<CxPoint>& directions = {});

struct BoundaryFrame {
  Eigen::VectorXd parameters;  // s_k
  std::vector<CxPoint> vectors;
  double smoothness = 0.0;     // max discrete second difference
  double max_step = 0.0;       // max |v_{k+1} - v_k|
  double closure_gap = 0.0;    // |transport(v_{K-1}) - v_0|
  int reference_index = 0;
  int transported = 0;         // samples that needed the transport fallback

  int size() const { return static_cast<int>(vectors.size()); }
};

BoundaryFrame build_frame(const DefiningFunction& df, const std::vector<CxPoint>& f1_boundary);

// Fourier-truncates the frame to modes <= max_mode, then re-projects onto the
// complex tangent spaces and renormalizes.
BoundaryFrame smooth_frame(const DefiningFunction& df, const std::vector<CxPoint>& f1_boundary,
                           const BoundaryFrame& frame, long max_mode);

}  // namespace holopush
