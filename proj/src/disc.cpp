#include "holopush/disc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "holopush/error.hpp"
#include "holopush/fourier.hpp"

namespace holopush {

namespace {

constexpr int kScanSteps = 200;
constexpr double kBisectionTol = 1e-12;
constexpr double kWindowLo = 0.2;
constexpr double kWindowHi = 0.8;

Complex bilinear(const CxPoint& a, const CxMatrix& S, const CxPoint& b) { return (a.transpose() * S * b)(0, 0); }

// Smallest |s| with (a + beta s)^2 - 4 gamma alpha s^2 = 0, or +inf.
double branch_radius(Complex a, Complex alpha, Complex beta, Complex gamma) {
  const Complex A = beta * beta - 4.0 * gamma * alpha;
  const Complex B = 2.0 * a * beta;
  const Complex C = a * a;
  const double scale = std::abs(B) + std::abs(C) + 1e-300;
  if (std::abs(A) <= 1e-14 * scale) {
    if (std::abs(B) <= 1e-14 * std::abs(C)) return std::numeric_limits<double>::infinity();
    return std::abs(C / B);
  }
  const Complex disc = std::sqrt(B * B - 4.0 * A * C);
  const Complex r1 = (-B + disc) / (2.0 * A);
  const Complex r2 = (-B - disc) / (2.0 * A);
  return std::min(std::abs(r1), std::abs(r2));
}

}  // namespace

Complex QuadricDisc::tau(Complex s) const {
  Complex acc = 0.0;
  for (Eigen::Index m = tau_coeffs.size() - 1; m >= 0; --m) acc = acc * s + tau_coeffs[m];
  return acc;
}

Complex QuadricDisc::tau_derivative(Complex s) const {
  Complex acc = 0.0;
  for (Eigen::Index m = tau_coeffs.size() - 1; m >= 1; --m) acc = acc * s + static_cast<double>(m) * tau_coeffs[m];
  return acc;
}

CxPoint QuadricDisc::operator()(Complex zeta) const {
  const Complex s = scale * zeta;
  return center + s * direction + tau(s) * transverse_dir;
}

CxPoint QuadricDisc::derivative(Complex zeta) const {
  const Complex s = scale * zeta;
  return scale * (direction + tau_derivative(s) * transverse_dir);
}

CxPoint QuadricDisc::coefficient(int j) const {
  if (j == 0) return center;
  if (j == 1) return scale * direction + scale * tau_coeffs[1] * transverse_dir;
  if (j >= tau_coeffs.size()) return CxPoint::Zero(center.size());
  return std::pow(scale, j) * tau_coeffs[j] * transverse_dir;
}

double QuadricDisc::quadric_residual(Complex zeta) const {
  const CxPoint w = (*this)(zeta)-center;
  return std::abs(2.0 * quadric_grad.cwiseProduct(w).sum() + bilinear(w, quadric_hess, w));
}

QuadricDisc build_disc(const DefiningFunction& df, const CxPoint& z, const CxPoint& v, double c,
                       const std::optional<CollarBand>& band) {
  const char* stage = "disc_family.build_disc";
  if (!(c > 0.0)) throw Error(ErrorKind::Argument, stage, "disc scale must be positive");
  if (!df.in_box(z)) throw Error(ErrorKind::Domain, stage, "disc center outside domain box");
  if (band && !band->contains(df.rho(z))) {
    std::ostringstream os;
    os << "disc center has rho = " << df.rho(z) << " outside collar band";
    throw Error(ErrorKind::Domain, stage, os.str());
  }
  if (std::abs(v.norm() - 1.0) > 1e-8) throw Error(ErrorKind::Argument, stage, "direction must be a unit vector");

  const CxPoint g = df.grad(z);
  const double gn = g.norm();
  if (gn < 1e-12) throw Error(ErrorKind::DegenerateGradient, stage, "gradient of rho vanishes at disc center");
  if (std::abs(g.cwiseProduct(v).sum()) > 1e-10)
    throw Error(ErrorKind::Argument, stage, "direction is not complex tangent: d rho(z) v != 0");

  QuadricDisc disc;
  disc.center = z;
  disc.direction = v.normalized();
  disc.transverse_dir = g.conjugate() / gn;
  disc.scale = c;
  disc.quadric_grad = g;
  disc.quadric_hess = df.hess_holo(z);

  const CxPoint& u = disc.transverse_dir;
  const CxMatrix& S = disc.quadric_hess;
  const Complex a = 2.0 * g.cwiseProduct(u).sum();
  const Complex alpha = bilinear(disc.direction, S, disc.direction);
  const Complex beta = 2.0 * bilinear(disc.direction, S, u);
  const Complex gamma = bilinear(u, S, u);

  // a tau + alpha s^2 + beta s tau + gamma tau^2 = 0, solved order by order on
  // the branch with tau = O(s^2).
  Eigen::VectorXcd t = Eigen::VectorXcd::Zero(kTauDegree + 1);
  for (int m = 2; m <= kTauDegree; ++m) {
    Complex rhs = (m == 2 ? alpha : Complex(0.0)) + beta * t[m - 1];
    for (int p = 2; p <= m - 2; ++p) rhs += gamma * t[p] * t[m - p];
    t[m] = -rhs / a;
  }
  disc.tau_coeffs = t;

  if (branch_radius(a, alpha, beta, gamma) <= c) {
    std::ostringstream os;
    os << "quadric branch point inside disc of radius " << c << "; shrink the scale";
    throw Error(ErrorKind::BranchDegeneracy, stage, os.str());
  }

  const double tol = 1e-9 * (1.0 + z.norm());
  for (int i = 0; i < 64; ++i) {
    const double r = static_cast<double>(i + 1) / 64.0;
    const double phi = 2.399963229728653 * i;  // golden angle
    if (disc.quadric_residual(std::polar(r, phi)) > tol) {
      std::ostringstream os;
      os << "truncated quadric series leaves residual above " << tol << " at |zeta| = " << r
         << "; shrink the scale";
      throw Error(ErrorKind::BranchDegeneracy, stage, os.str());
    }
  }
  return disc;
}

Crossing crossing(const DefiningFunction& df, const QuadricDisc& disc, double theta) {
  const char* stage = "disc_family.crossing_radius";
  const Complex dir = std::polar(1.0, theta);
  auto profile = [&](double t) { return df.rho(disc(t * dir)); };

  if (!(profile(0.0) < 0.0)) throw Error(ErrorKind::Domain, stage, "disc center is not inside the domain");

  double lo = 0.0, hi = -1.0;
  for (int i = 1; i <= kScanSteps; ++i) {
    const double t = static_cast<double>(i) / kScanSteps;
    if (profile(t) >= 0.0) {
      hi = t;
      break;
    }
    lo = t;
  }
  if (hi < 0.0) throw Error(ErrorKind::DiscTooSmall, stage, "disc does not reach the boundary; increase the scale");

  while (hi - lo > kBisectionTol) {
    const double mid = 0.5 * (lo + hi);
    (profile(mid) < 0.0 ? lo : hi) = mid;
  }
  Crossing out;
  out.radius = 0.5 * (lo + hi);
  const Complex zeta = out.radius * dir;
  out.transversality = directional_derivative(df, disc(zeta), disc.derivative(zeta) * dir);
  if (!(out.transversality > 1e-10)) {
    std::ostringstream os;
    os << "disc meets the boundary tangentially at t = " << out.radius << " (d rho/dt = " << out.transversality
       << ")";
    throw Error(ErrorKind::Tangency, stage, os.str());
  }
  return out;
}

CxPoint default_tangent_direction(const DefiningFunction& df, const CxPoint& z) {
  const CxMatrix P = complex_tangent_projector(df, z);
  Eigen::Index best = 0;
  P.colwise().norm().maxCoeff(&best);
  return P.col(best).normalized();
}

double choose_scale(const DefiningFunction& df, const std::vector<CxPoint>& boundary_points, const CollarBand& band,
                    const std::vector<CxPoint>& directions) {
  const char* stage = "disc_family.choose_scale";
  if (boundary_points.empty()) throw Error(ErrorKind::Argument, stage, "no boundary points");
  if (!directions.empty() && directions.size() != boundary_points.size())
    throw Error(ErrorKind::Argument, stage, "direction count does not match point count");
  if (!(band.lambda_min > 0.0)) throw Error(ErrorKind::Argument, stage, "collar band needs a positive Levi bound");

  std::vector<CxPoint> dirs = directions;
  if (dirs.empty())
    for (const auto& p : boundary_points) dirs.push_back(default_tangent_direction(df, p));
  for (const auto& p : boundary_points)
    if (!band.contains(df.rho(p))) throw Error(ErrorKind::Domain, stage, "boundary point outside collar band");

  double c = 2.0 * std::sqrt(std::abs(band.rho_lo) / band.lambda_min);
  double tmin = 0.0, tmax = 0.0;
  for (int iter = 0; iter < 60; ++iter) {
    tmin = std::numeric_limits<double>::infinity();
    tmax = 0.0;
    bool rescaled = false;
    for (std::size_t i = 0; i < boundary_points.size() && !rescaled; ++i) {
      try {
        const QuadricDisc disc = build_disc(df, boundary_points[i], dirs[i], c, band);
        // Probe a few directions around the disc.
        for (int q = 0; q < 4; ++q) {
          const double t = crossing_radius(df, disc, q * std::numbers::pi / 2.0);
          tmin = std::min(tmin, t);
          tmax = std::max(tmax, t);
        }
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::DiscTooSmall) {
          c *= 2.0;
          rescaled = true;
        } else if (e.kind() == ErrorKind::BranchDegeneracy) {
          c *= 0.5;
          rescaled = true;
        } else {
          throw;
        }
      }
    }
    if (rescaled) continue;

    if (tmax > 4.0 * tmin) {
      std::ostringstream os;
      os << "crossing radii span [" << tmin << ", " << tmax
         << "], wider than the admissible window ratio; use a thinner collar band";
      throw Error(ErrorKind::Configuration, stage, os.str());
    }
    const double mid = std::sqrt(tmin * tmax);
    const bool in_window = tmin >= kWindowLo && tmax <= kWindowHi;
    if (in_window && std::abs(mid - 0.5) < 1e-3) return c;
    c *= std::clamp(mid / 0.5, 0.5, 2.0);
  }
  if (tmin >= kWindowLo && tmax <= kWindowHi) return c;
  throw Error(ErrorKind::Configuration, stage, "no disc scale puts all crossings in [0.2, 0.8]; use a thinner band");
}

// ---------------------------------------------------------------------------

namespace {

void finish_frame(BoundaryFrame& frame) {
  const int K = frame.size();
  frame.smoothness = 0.0;
  frame.max_step = 0.0;
  for (int k = 0; k < K; ++k) {
    const CxPoint& prev = frame.vectors[(k + K - 1) % K];
    const CxPoint& cur = frame.vectors[k];
    const CxPoint& next = frame.vectors[(k + 1) % K];
    frame.smoothness = std::max(frame.smoothness, (next - 2.0 * cur + prev).norm());
    frame.max_step = std::max(frame.max_step, (next - cur).norm());
  }
  if (frame.max_step > 10.0 * 2.0 * std::numbers::pi / K) {
    std::ostringstream os;
    os << "frame jumps by " << frame.max_step << " between neighbouring samples";
    throw Error(ErrorKind::Frame, "disc_family.build_frame", os.str());
  }
}

}  // namespace

BoundaryFrame build_frame(const DefiningFunction& df, const std::vector<CxPoint>& f1_boundary) {
  const char* stage = "disc_family.build_frame";
  const int K = static_cast<int>(f1_boundary.size());
  if (!is_power_of_two(K) || K < 64)
    throw Error(ErrorKind::Argument, stage, "frame grid size must be a power of two and at least 64");
  const int n = df.dimension();

  std::vector<CxMatrix> P(K);
  for (int k = 0; k < K; ++k) P[k] = complex_tangent_projector(df, f1_boundary[k]);

  // Reference basis e_1..e_n, i e_1..i e_n; keep the one whose worst projection is largest.
  int best = -1;
  double best_min = -1.0, best_max = 0.0;
  for (int cand = 0; cand < 2 * n; ++cand) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int k = 0; k < K; ++k) {
      const double len = P[k].col(cand % n).norm();
      lo = std::min(lo, len);
      hi = std::max(hi, len);
    }
    if (lo > best_min) {
      best_min = lo;
      best_max = hi;
      best = cand;
    }
  }
  if (best < 0 || best_max < 0.1)
    throw Error(ErrorKind::Frame, stage, "projection collapses for every reference vector");

  const Complex phase = best < n ? Complex(1.0) : Complex(0.0, 1.0);
  CxPoint e = CxPoint::Zero(n);
  e[best % n] = phase;

  BoundaryFrame frame;
  frame.parameters = periodic_grid<double>(K);
  frame.reference_index = best;
  frame.vectors.resize(K);

  if (best_min >= 0.1) {
    for (int k = 0; k < K; ++k) frame.vectors[k] = (P[k] * e).normalized();
    // The loop is periodic, so the vector rebuilt at s = 2 pi must equal v_0.
    frame.closure_gap = ((P[0] * e).normalized() - frame.vectors[0]).norm();
  } else {
    // Start where the reference projects best and transport across the weak spots.
    int start = 0;
    double top = 0.0;
    for (int k = 0; k < K; ++k)
      if (const double len = (P[k] * e).norm(); len > top) {
        top = len;
        start = k;
      }
    frame.vectors[start] = (P[start] * e).normalized();
    for (int step = 1; step < K; ++step) {
      const int k = (start + step) % K;
      const CxPoint direct = P[k] * e;
      if (direct.norm() >= 0.1) {
        CxPoint cand = direct.normalized();
        // Keep the direct projection only if it continues the transported vector.
        const CxPoint transported = (P[k] * frame.vectors[(k + K - 1) % K]).normalized();
        if ((cand - transported).norm() <= 10.0 * 2.0 * std::numbers::pi / K) {
          frame.vectors[k] = cand;
          continue;
        }
      }
      frame.vectors[k] = (P[k] * frame.vectors[(k + K - 1) % K]).normalized();
      ++frame.transported;
    }
    // Spread the holonomy phase so the frame closes up.
    const CxPoint back = (P[start] * frame.vectors[(start + K - 1) % K]).normalized();
    const double holonomy = std::arg(frame.vectors[start].dot(back));
    for (int step = 0; step < K; ++step) {
      const int k = (start + step) % K;
      frame.vectors[k] *= std::polar(1.0, -holonomy * step / K);
    }
    // v_K: one more transport step with the same per-step phase correction.
    const CxPoint closed =
        std::polar(1.0, -holonomy / K) * (P[start] * frame.vectors[(start + K - 1) % K]).normalized();
    frame.closure_gap = (closed - frame.vectors[start]).norm();
  }
  finish_frame(frame);
  return frame;
}

BoundaryFrame smooth_frame(const DefiningFunction& df, const std::vector<CxPoint>& f1_boundary,
                           const BoundaryFrame& frame, long max_mode) {
  const int K = frame.size();
  const int n = df.dimension();
  BoundaryFrame out = frame;
  for (int j = 0; j < n; ++j) {
    CxVector<double> column(K);
    for (int k = 0; k < K; ++k) column[k] = frame.vectors[k][j];
    const CxVector<double> smooth = truncate_modes<double>(column, max_mode);
    for (int k = 0; k < K; ++k) out.vectors[k][j] = smooth[k];
  }
  for (int k = 0; k < K; ++k) {
    const CxPoint projected = complex_tangent_projector(df, f1_boundary[k]) * out.vectors[k];
    if (projected.norm() < 1e-6)
      throw Error(ErrorKind::Frame, "disc_family.smooth_frame", "smoothed frame leaves the complex tangent space");
    out.vectors[k] = projected.normalized();
  }
  finish_frame(out);
  return out;
}

}  // namespace holopush
