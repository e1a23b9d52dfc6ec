#include "holopush/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

#include "holopush/error.hpp"
#include "holopush/fourier.hpp"
#include "holopush/parallel.hpp"

namespace holopush {

FiberPolynomial FiberPolynomial::at(const CenterFamily& cf, Complex x) {
  FiberPolynomial fp;
  fp.base = cf.f1.eval(x);
  fp.coeffs.reserve(cf.surrogate.size());
  for (const auto& Hj : cf.surrogate) fp.coeffs.push_back(Hj.eval(x));
  return fp;
}

CxPoint FiberPolynomial::operator()(Complex zeta) const {
  CxPoint acc = CxPoint::Zero(base.size());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (acc + *it) * zeta;
  return base + acc;
}

CxPoint FiberPolynomial::derivative(Complex zeta) const {
  CxPoint acc = CxPoint::Zero(base.size());
  for (std::size_t j = coeffs.size(); j >= 1; --j) acc = acc * zeta + static_cast<double>(j) * coeffs[j - 1];
  return acc;
}

double CurveFamily::log_radius(int comp, int k, double theta) const {
  const CurveComponent& c = components[comp];
  double acc = c.log_fourier(k, 0).real();
  for (int m = 1; m <= c.max_mode; ++m) acc += 2.0 * (c.log_fourier(k, m) * std::polar(1.0, m * theta)).real();
  return acc;
}

double CurveFamily::log_radius_dtheta(int comp, int k, double theta) const {
  const CurveComponent& c = components[comp];
  double acc = 0.0;
  for (int m = 1; m <= c.max_mode; ++m)
    acc += 2.0 * (Complex(0.0, m) * c.log_fourier(k, m) * std::polar(1.0, m * theta)).real();
  return acc;
}

double CurveFamily::max_radius() const {
  double r = 0.0;
  for (const auto& c : components) r = std::max(r, c.radii.maxCoeff());
  return r;
}

double CurveFamily::min_radius() const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& c : components) r = std::min(r, c.radii.minCoeff());
  return r;
}

Complex curve_point(const CurveFamily& cfam, int comp, int k, double theta) {
  return std::exp(cfam.log_radius(comp, k, theta)) * std::polar(1.0, theta);
}

CurveFamily curve_family_from_radii(std::vector<Eigen::MatrixXd> radii) {
  if (radii.empty()) throw Error(ErrorKind::Argument, "curve_detect", "no curve components");
  CurveFamily fam;
  fam.K = static_cast<int>(radii[0].rows());
  fam.A = static_cast<int>(radii[0].cols());
  if (!is_power_of_two(fam.A) || fam.A < 8)
    throw Error(ErrorKind::Argument, "curve_detect", "angle count must be a power of two >= 8");
  fam.starlike_cert = true;
  fam.transversality_margin = std::numeric_limits<double>::infinity();
  const int M = fam.A / 8;
  for (auto& R : radii) {
    if (R.rows() != fam.K || R.cols() != fam.A)
      throw Error(ErrorKind::Argument, "curve_detect", "curve components must share grid sizes");
    if ((R.array() <= 0.0).any()) fam.starlike_cert = false;
    CurveComponent comp;
    comp.max_mode = M;
    comp.log_fourier.resize(fam.K, M + 1);
    for (int k = 0; k < fam.K; ++k) {
      const RealVector<double> logr = R.row(k).transpose().array().log();
      const CxVector<double> c = fourier_coefficients<double>(logr);
      comp.log_fourier.row(k) = c.head(M + 1).transpose();
    }
    comp.radii = std::move(R);
    fam.components.push_back(std::move(comp));
  }
  for (int ci = 0; ci < static_cast<int>(fam.components.size()); ++ci) {
    const auto& comp = fam.components[ci];
    for (int k = 0; k < fam.K; ++k)
      for (int a = 0; a < fam.A; ++a) {
        const double theta = 2.0 * std::numbers::pi * a / fam.A;
        fam.smoothing_residual =
            std::max(fam.smoothing_residual, std::abs(fam.log_radius(ci, k, theta) - std::log(comp.radii(k, a))));
        const double slope = std::abs(comp.radii(k, (a + 1) % fam.A) - comp.radii(k, a)) * fam.A /
                             (2.0 * std::numbers::pi);
        fam.max_angular_slope = std::max(fam.max_angular_slope, slope);
      }
  }
  return fam;
}

CurveFamily detect_curves(const CenterFamily& cf, const DefiningFunction& df, int A) {
  if (!cf.fitted()) throw Error(ErrorKind::Argument, "curve_detect", "surrogate must be fitted first");
  const int K = cf.surface.K;
  const int comps = cf.surface.components();
  constexpr int kScan = 190;  // step 0.005 on (0, 0.95]

  std::vector<Eigen::MatrixXd> radii(comps, Eigen::MatrixXd(K, A));
  std::vector<double> margin(static_cast<std::size_t>(comps * K), std::numeric_limits<double>::infinity());
  std::vector<int> reentry(static_cast<std::size_t>(comps * K), 0);

  for (int comp = 0; comp < comps; ++comp) {
    parallel_for(static_cast<std::size_t>(K), [&](std::size_t kk) {
      const int k = static_cast<int>(kk);
      const FiberPolynomial fiber = FiberPolynomial::at(cf, cf.surface.boundary_point(comp, k));
      if (!(df.rho(fiber.base) < 0.0)) {
        std::ostringstream os;
        os << "center H(x_k, 0) not inside the domain at component " << comp << ", k = " << k;
        throw Error(ErrorKind::CollarViolation, "curve_detect.collar", os.str());
      }
      for (int a = 0; a < A; ++a) {
        const double theta = 2.0 * std::numbers::pi * a / A;
        const Complex dir = std::polar(1.0, theta);
        auto profile = [&](double t) { return df.rho(fiber(t * dir)); };
        double lo = 0.0, hi = -1.0;
        int i = 1;
        for (; i <= kScan; ++i) {
          const double t = kCurveSearchLimit * i / kScan;
          if (profile(t) >= 0.0) {
            hi = t;
            break;
          }
          lo = t;
        }
        if (hi < 0.0) {
          std::ostringstream os;
          os << "no boundary crossing on (0, 0.95] at component " << comp << ", k = " << k << ", a = " << a
             << " (f1 too deep inside or surrogate fit too loose)";
          throw Error(ErrorKind::CollarViolation, "curve_detect.collar", os.str());
        }
        for (int j = i + 1; j <= kScan; ++j)
          if (profile(kCurveSearchLimit * j / kScan) < 0.0) {
            ++reentry[comp * K + k];
            break;
          }
        while (hi - lo > 1e-12) {
          const double mid = 0.5 * (lo + hi);
          (profile(mid) < 0.0 ? lo : hi) = mid;
        }
        const double t = 0.5 * (lo + hi);
        const Complex zeta = t * dir;
        const double slope = directional_derivative(df, fiber(zeta), fiber.derivative(zeta) * dir);
        if (!(slope > 1e-10)) {
          std::ostringstream os;
          os << "curve meets the boundary tangentially at component " << comp << ", k = " << k << ", a = " << a
             << " (d rho/dt = " << slope << ")";
          throw Error(ErrorKind::Tangency, "curve_detect.tangency", os.str());
        }
        if (t <= 0.05) {
          std::ostringstream os;
          os << "crossing radius " << t << " <= 0.05 at component " << comp << ", k = " << k << ", a = " << a
             << " (f1 too close to the boundary)";
          throw Error(ErrorKind::CollarViolation, "curve_detect.collar", os.str());
        }
        radii[comp](k, a) = t;
        margin[comp * K + k] = std::min(margin[comp * K + k], slope);
      }
    });
  }

  CurveFamily fam = curve_family_from_radii(std::move(radii));
  fam.transversality_margin = *std::min_element(margin.begin(), margin.end());
  for (int v : reentry) fam.reentries += v;
  if (fam.reentries > 0) {
    std::ostringstream os;
    os << fam.reentries << " boundary samples see rho turn negative again before t = 0.95; first crossing kept";
    fam.warnings.push_back(os.str());
  }
  return fam;
}

}  // namespace holopush
