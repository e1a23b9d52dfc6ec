#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace holopush {

using Complex = std::complex<double>;
using CxPoint = Eigen::VectorXcd;
using CxMatrix = Eigen::MatrixXcd;

// Smooth real function rho on a polydisc box of C^n, Omega = {rho < 0}.
// Derivatives are Wirtinger derivatives: grad_j = d rho / d z_j,
// hess_holo_jk = d^2 rho / dz_j dz_k, hess_mixed_ij = d^2 rho / dz_i dzbar_j.
class DefiningFunction {
 public:
  DefiningFunction(int dimension, double box_radius);
  virtual ~DefiningFunction() = default;

  int dimension() const { return dimension_; }
  double box_radius() const { return box_radius_; }
  bool in_box(const CxPoint& z) const;

  virtual double rho(const CxPoint& z) const = 0;
  virtual CxPoint grad(const CxPoint& z) const = 0;
  virtual CxMatrix hess_holo(const CxPoint& z) const = 0;
  virtual CxMatrix hess_mixed(const CxPoint& z) const = 0;

 private:
  int dimension_;
  double box_radius_;
};

// rho = sum_j weight_j |z_j|^2 - 1. Covers the ball and axis-aligned ellipsoids.
class QuadraticDefiningFunction final : public DefiningFunction {
 public:
  explicit QuadraticDefiningFunction(Eigen::VectorXd weights, double box_radius = 0.0);

  static QuadraticDefiningFunction ball(int dimension);
  static QuadraticDefiningFunction ellipsoid(const std::vector<double>& radii);

  const Eigen::VectorXd& weights() const { return weights_; }

  double rho(const CxPoint& z) const override;
  CxPoint grad(const CxPoint& z) const override;
  CxMatrix hess_holo(const CxPoint& z) const override;
  CxMatrix hess_mixed(const CxPoint& z) const override;

 private:
  Eigen::VectorXd weights_;
};

struct Monomial {
  std::vector<int> z_powers;     // alpha
  std::vector<int> zbar_powers;  // beta
  Complex coefficient;
};

// rho = Re sum_m c_m z^alpha_m zbar^beta_m.
class PolynomialDefiningFunction final : public DefiningFunction {
 public:
  PolynomialDefiningFunction(int dimension, std::vector<Monomial> terms, double box_radius);

  const std::vector<Monomial>& terms() const { return terms_; }

  double rho(const CxPoint& z) const override;
  CxPoint grad(const CxPoint& z) const override;
  CxMatrix hess_holo(const CxPoint& z) const override;
  CxMatrix hess_mixed(const CxPoint& z) const override;

 private:
  // Value of the raw complex polynomial P with dz[i] derivatives in z_i and
  // dzb[i] derivatives in zbar_i applied.
  Complex derivative(const CxPoint& z, const std::vector<int>& dz, const std::vector<int>& dzb) const;

  std::vector<Monomial> terms_;
};

// Black-box rho with central finite-difference derivatives.
class FiniteDifferenceDefiningFunction final : public DefiningFunction {
 public:
  using Evaluator = std::function<double(const CxPoint&)>;

  FiniteDifferenceDefiningFunction(int dimension, Evaluator rho, double box_radius,
                                   double grad_step = 1e-5, double hess_step = 1e-4);

  double rho(const CxPoint& z) const override;
  CxPoint grad(const CxPoint& z) const override;
  CxMatrix hess_holo(const CxPoint& z) const override;
  CxMatrix hess_mixed(const CxPoint& z) const override;

 private:
  Eigen::MatrixXd real_hessian(const CxPoint& z) const;

  Evaluator rho_;
  double grad_step_;
  double hess_step_;
};

// Band {rho_lo <= rho <= rho_hi} inside Omega on which discs are attached.
struct CollarBand {
  double rho_lo = -0.25;
  double rho_hi = -0.02;
  double lambda_min = 1.0;

  bool contains(double rho) const { return rho >= rho_lo && rho <= rho_hi; }
  static CollarBand from_scale(double scale, double lambda_min = 1.0);
};

enum class AdmissibilityMode { Strict, TwoPositive };

struct AdmissibilityReport {
  bool pass = false;
  AdmissibilityMode mode = AdmissibilityMode::Strict;
  std::size_t samples = 0;
  std::size_t failures = 0;
  double min_eigenvalue = 0.0;
  // Smallest positive eigenvalue seen; the usable Levi bound in TwoPositive mode.
  double min_positive_eigenvalue = 0.0;
  double min_grad_norm = 0.0;
  std::string message;
};

double levi_form(const DefiningFunction& df, const CxPoint& z, const CxPoint& w);

double taylor_model(const DefiningFunction& df, const CxPoint& z, const CxPoint& w);

AdmissibilityReport check_admissible(const DefiningFunction& df, const CollarBand& band,
                                     const std::vector<CxPoint>& samples,
                                     AdmissibilityMode mode = AdmissibilityMode::Strict);

// Orthogonal projector onto ker d rho(z) = {w : sum_j grad_j w_j = 0}.
CxMatrix complex_tangent_projector(const DefiningFunction& df, const CxPoint& z);

// d/dt rho(p + t q) at t = 0 for complex q, i.e. 2 Re(grad(p) . q).
double directional_derivative(const DefiningFunction& df, const CxPoint& p, const CxPoint& q);

}  // namespace holopush
