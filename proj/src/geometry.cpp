#include "holopush/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "holopush/error.hpp"

namespace holopush {

namespace {

void require_in_box(const DefiningFunction& df, const CxPoint& z, const char* stage) {
  if (z.size() != df.dimension())
    throw Error(ErrorKind::Argument, stage, "point dimension does not match defining function");
  if (!df.in_box(z)) {
    std::ostringstream os;
    os << "point outside domain box of radius " << df.box_radius();
    throw Error(ErrorKind::Domain, stage, os.str());
  }
}

// z^k for integer k >= 0, exact for small powers.
Complex ipow(Complex z, int k) {
  Complex r(1.0, 0.0);
  while (k-- > 0) r *= z;
  return r;
}

// d^m/dz^m z^p = p!/(p-m)! z^(p-m)
Complex falling_power(Complex z, int p, int m) {
  if (m > p) return 0.0;
  double factor = 1.0;
  for (int i = 0; i < m; ++i) factor *= static_cast<double>(p - i);
  return factor * ipow(z, p - m);
}

}  // namespace

DefiningFunction::DefiningFunction(int dimension, double box_radius)
    : dimension_(dimension), box_radius_(box_radius) {
  if (dimension < 2) throw Error(ErrorKind::Argument, "domain_geometry", "dimension must be at least 2");
  if (!(box_radius > 0.0)) throw Error(ErrorKind::Argument, "domain_geometry", "domain box radius must be positive");
}

bool DefiningFunction::in_box(const CxPoint& z) const {
  if (z.size() != dimension_) return false;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    if (!std::isfinite(z[j].real()) || !std::isfinite(z[j].imag())) return false;
    if (std::abs(z[j]) > box_radius_) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

QuadraticDefiningFunction::QuadraticDefiningFunction(Eigen::VectorXd weights, double box_radius)
    : DefiningFunction(static_cast<int>(weights.size()),
                       box_radius > 0.0 ? box_radius : 4.0 / std::sqrt(std::max(weights.minCoeff(), 1e-300))),
      weights_(std::move(weights)) {
  if ((weights_.array() <= 0.0).any())
    throw Error(ErrorKind::Argument, "domain_geometry", "quadratic weights must be positive");
}

QuadraticDefiningFunction QuadraticDefiningFunction::ball(int dimension) {
  return QuadraticDefiningFunction(Eigen::VectorXd::Ones(dimension));
}

QuadraticDefiningFunction QuadraticDefiningFunction::ellipsoid(const std::vector<double>& radii) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(radii.size()));
  for (std::size_t j = 0; j < radii.size(); ++j) {
    if (!(radii[j] > 0.0)) throw Error(ErrorKind::Argument, "domain_geometry", "ellipsoid radii must be positive");
    w[static_cast<Eigen::Index>(j)] = 1.0 / (radii[j] * radii[j]);
  }
  return QuadraticDefiningFunction(std::move(w));
}

double QuadraticDefiningFunction::rho(const CxPoint& z) const {
  return (weights_.array() * z.array().abs2()).sum() - 1.0;
}

CxPoint QuadraticDefiningFunction::grad(const CxPoint& z) const {
  return (weights_.cast<Complex>().array() * z.conjugate().array()).matrix();
}

CxMatrix QuadraticDefiningFunction::hess_holo(const CxPoint& z) const {
  return CxMatrix::Zero(z.size(), z.size());
}

CxMatrix QuadraticDefiningFunction::hess_mixed(const CxPoint& z) const {
  (void)z;
  return weights_.cast<Complex>().asDiagonal().toDenseMatrix();
}

// ---------------------------------------------------------------------------

PolynomialDefiningFunction::PolynomialDefiningFunction(int dimension, std::vector<Monomial> terms,
                                                       double box_radius)
    : DefiningFunction(dimension, box_radius), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (static_cast<int>(t.z_powers.size()) != dimension || static_cast<int>(t.zbar_powers.size()) != dimension)
      throw Error(ErrorKind::Argument, "domain_geometry", "monomial multi-index length must equal 2n");
    for (int p : t.z_powers)
      if (p < 0) throw Error(ErrorKind::Argument, "domain_geometry", "negative monomial power");
    for (int p : t.zbar_powers)
      if (p < 0) throw Error(ErrorKind::Argument, "domain_geometry", "negative monomial power");
  }
}

Complex PolynomialDefiningFunction::derivative(const CxPoint& z, const std::vector<int>& dz,
                                               const std::vector<int>& dzb) const {
  const int n = dimension();
  Complex total(0.0, 0.0);
  for (const auto& t : terms_) {
    Complex term = t.coefficient;
    for (int i = 0; i < n && term != Complex(0.0); ++i) {
      term *= falling_power(z[i], t.z_powers[i], dz[i]);
      term *= falling_power(std::conj(z[i]), t.zbar_powers[i], dzb[i]);
    }
    total += term;
  }
  return total;
}

double PolynomialDefiningFunction::rho(const CxPoint& z) const {
  const std::vector<int> none(dimension(), 0);
  return derivative(z, none, none).real();
}

CxPoint PolynomialDefiningFunction::grad(const CxPoint& z) const {
  const int n = dimension();
  CxPoint g(n);
  std::vector<int> none(n, 0), d(n, 0);
  for (int j = 0; j < n; ++j) {
    d[j] = 1;
    g[j] = 0.5 * (derivative(z, d, none) + std::conj(derivative(z, none, d)));
    d[j] = 0;
  }
  return g;
}

CxMatrix PolynomialDefiningFunction::hess_holo(const CxPoint& z) const {
  const int n = dimension();
  CxMatrix h(n, n);
  std::vector<int> none(n, 0), d(n, 0);
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      ++d[j];
      ++d[k];
      h(j, k) = 0.5 * (derivative(z, d, none) + std::conj(derivative(z, none, d)));
      h(k, j) = h(j, k);
      --d[j];
      --d[k];
    }
  }
  return h;
}

CxMatrix PolynomialDefiningFunction::hess_mixed(const CxPoint& z) const {
  const int n = dimension();
  CxMatrix h(n, n);
  std::vector<int> a(n, 0), b(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a[i] = 1;
      b[j] = 1;
      // d^2 Re P / dz_i dzbar_j = (P_{z_i zbar_j} + conj(P_{zbar_i z_j})) / 2
      const Complex p1 = derivative(z, a, b);
      a[i] = 0;
      b[j] = 0;
      a[j] = 1;
      b[i] = 1;
      const Complex p2 = derivative(z, a, b);
      a[j] = 0;
      b[i] = 0;
      h(i, j) = 0.5 * (p1 + std::conj(p2));
    }
  }
  return h;
}

// ---------------------------------------------------------------------------

FiniteDifferenceDefiningFunction::FiniteDifferenceDefiningFunction(int dimension, Evaluator rho,
                                                                   double box_radius, double grad_step,
                                                                   double hess_step)
    : DefiningFunction(dimension, box_radius),
      rho_(std::move(rho)),
      grad_step_(grad_step),
      hess_step_(hess_step) {}

double FiniteDifferenceDefiningFunction::rho(const CxPoint& z) const { return rho_(z); }

CxPoint FiniteDifferenceDefiningFunction::grad(const CxPoint& z) const {
  const int n = dimension();
  const double h = grad_step_;
  CxPoint g(n);
  for (int j = 0; j < n; ++j) {
    CxPoint p = z, m = z;
    p[j] += h;
    m[j] -= h;
    const double dx = (rho_(p) - rho_(m)) / (2.0 * h);
    p = z;
    m = z;
    p[j] += Complex(0.0, h);
    m[j] -= Complex(0.0, h);
    const double dy = (rho_(p) - rho_(m)) / (2.0 * h);
    g[j] = 0.5 * Complex(dx, -dy);
  }
  return g;
}

// Real Hessian in coordinates (x_1, y_1, ..., x_n, y_n).
Eigen::MatrixXd FiniteDifferenceDefiningFunction::real_hessian(const CxPoint& z) const {
  const int n = dimension();
  const double h = hess_step_;
  auto shifted = [&](int a, double sa, int b, double sb) {
    CxPoint p = z;
    auto bump = [&](int idx, double s) {
      p[idx / 2] += (idx % 2 == 0) ? Complex(s, 0.0) : Complex(0.0, s);
    };
    bump(a, sa);
    bump(b, sb);
    return rho_(p);
  };
  Eigen::MatrixXd H(2 * n, 2 * n);
  const double f0 = rho_(z);
  for (int a = 0; a < 2 * n; ++a) {
    H(a, a) = (shifted(a, h, a, 0.0) - 2.0 * f0 + shifted(a, -h, a, 0.0)) / (h * h);
    for (int b = a + 1; b < 2 * n; ++b) {
      H(a, b) = (shifted(a, h, b, h) - shifted(a, h, b, -h) - shifted(a, -h, b, h) + shifted(a, -h, b, -h)) /
                (4.0 * h * h);
      H(b, a) = H(a, b);
    }
  }
  return H;
}

CxMatrix FiniteDifferenceDefiningFunction::hess_holo(const CxPoint& z) const {
  const int n = dimension();
  const Eigen::MatrixXd H = real_hessian(z);
  CxMatrix out(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double xx = H(2 * j, 2 * k), xy = H(2 * j, 2 * k + 1), yx = H(2 * j + 1, 2 * k),
                   yy = H(2 * j + 1, 2 * k + 1);
      out(j, k) = 0.25 * Complex(xx - yy, -(xy + yx));
    }
  return 0.5 * (out + out.transpose());
}

CxMatrix FiniteDifferenceDefiningFunction::hess_mixed(const CxPoint& z) const {
  const int n = dimension();
  const Eigen::MatrixXd H = real_hessian(z);
  CxMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double xx = H(2 * i, 2 * j), xy = H(2 * i, 2 * j + 1), yx = H(2 * i + 1, 2 * j),
                   yy = H(2 * i + 1, 2 * j + 1);
      out(i, j) = 0.25 * Complex(xx + yy, xy - yx);
    }
  return 0.5 * (out + out.adjoint());
}

// ---------------------------------------------------------------------------

CollarBand CollarBand::from_scale(double scale, double lambda_min) {
  return CollarBand{-0.25 * scale, -0.02 * scale, lambda_min};
}

double levi_form(const DefiningFunction& df, const CxPoint& z, const CxPoint& w) {
  require_in_box(df, z, "domain_geometry.levi_form");
  const CxMatrix M = df.hess_mixed(z);
  const Complex value = (w.transpose() * M * w.conjugate())(0, 0);
  const double scale = std::max(1.0, w.squaredNorm() * std::max(1.0, M.cwiseAbs().maxCoeff()));
  if (std::abs(value.imag()) > 1e-8 * scale)
    throw Error(ErrorKind::InconsistentHessian, "domain_geometry.levi_form",
                "mixed Hessian is not Hermitian: Levi form has an imaginary part");
  return value.real();
}

double taylor_model(const DefiningFunction& df, const CxPoint& z, const CxPoint& w) {
  require_in_box(df, z, "domain_geometry.taylor_model");
  const CxPoint g = df.grad(z);
  const CxMatrix S = df.hess_holo(z);
  const Complex holo = 2.0 * g.cwiseProduct(w).sum() + (w.transpose() * S * w)(0, 0);
  return df.rho(z) + holo.real() + levi_form(df, z, w);
}

AdmissibilityReport check_admissible(const DefiningFunction& df, const CollarBand& band,
                                     const std::vector<CxPoint>& samples, AdmissibilityMode mode) {
  if (samples.empty())
    throw Error(ErrorKind::Argument, "domain_geometry.admissibility", "empty sample list");

  AdmissibilityReport rep;
  rep.mode = mode;
  rep.samples = samples.size();
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  rep.min_positive_eigenvalue = std::numeric_limits<double>::infinity();
  rep.min_grad_norm = std::numeric_limits<double>::infinity();

  for (const auto& z : samples) {
    require_in_box(df, z, "domain_geometry.admissibility");
    const double r = df.rho(z);
    if (!band.contains(r)) {
      std::ostringstream os;
      os << "sample with rho = " << r << " outside collar band [" << band.rho_lo << ", " << band.rho_hi << "]";
      throw Error(ErrorKind::Domain, "domain_geometry.admissibility", os.str());
    }
    const CxMatrix M = df.hess_mixed(z);
    Eigen::SelfAdjointEigenSolver<CxMatrix> es(M, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, ev.minCoeff());
    int positive = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (ev[i] > 0.0) {
        ++positive;
        rep.min_positive_eigenvalue = std::min(rep.min_positive_eigenvalue, ev[i]);
      }
    }
    const double gn = df.grad(z).norm();
    rep.min_grad_norm = std::min(rep.min_grad_norm, gn);

    const bool levi_ok = mode == AdmissibilityMode::Strict ? ev.minCoeff() > 0.0 : positive >= 2;
    if (!levi_ok || !(gn > 1e-12)) ++rep.failures;
  }

  rep.pass = rep.failures == 0;
  std::ostringstream os;
  if (rep.pass) {
    os << "admissible on " << rep.samples << " samples";
  } else {
    os << rep.failures << " of " << rep.samples << " samples violate "
       << (mode == AdmissibilityMode::Strict ? "strict plurisubharmonicity" : "the two-positive-eigenvalue condition")
       << " or have vanishing gradient";
  }
  rep.message = os.str();
  return rep;
}

CxMatrix complex_tangent_projector(const DefiningFunction& df, const CxPoint& z) {
  const CxPoint normal = df.grad(z).conjugate();
  const double nn = normal.squaredNorm();
  if (std::sqrt(nn) < 1e-12)
    throw Error(ErrorKind::DegenerateGradient, "domain_geometry.projector", "gradient of rho vanishes");
  const Eigen::Index n = z.size();
  return CxMatrix::Identity(n, n) - normal * normal.adjoint() / nn;
}

double directional_derivative(const DefiningFunction& df, const CxPoint& p, const CxPoint& q) {
  return 2.0 * df.grad(p).cwiseProduct(q).sum().real();
}

}  // namespace holopush
