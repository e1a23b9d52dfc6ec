#pragma once

#include <complex>

#include <Eigen/Dense>

namespace holopush {

using Complex = std::complex<double>;

// Scalar Laurent polynomial sum_{p = lowest}^{lowest + size - 1} c_p x^p.
// Polynomials are the lowest() == 0 case.
class LaurentSeries {
 public:
  LaurentSeries() = default;
  LaurentSeries(int lowest, Eigen::VectorXcd coeffs) : lowest_(lowest), coeffs_(std::move(coeffs)) {}

  static LaurentSeries monomial(int exponent, Complex c = 1.0);

  int lowest() const { return lowest_; }
  int highest() const { return lowest_ + static_cast<int>(coeffs_.size()) - 1; }
  bool empty() const { return coeffs_.size() == 0; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Eigen::VectorXcd& coeffs() { return coeffs_; }

  // Coefficient of x^p, zero outside the stored range.
  Complex operator[](int p) const;

  Complex eval(Complex x) const;
  Complex derivative(Complex x) const;

  // Drops leading and trailing coefficients with |c| <= tol.
  LaurentSeries trimmed(double tol = 0.0) const;

 private:
  int lowest_ = 0;
  Eigen::VectorXcd coeffs_;
};

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);

// C^n-valued Laurent polynomial, one row per coordinate.
class LaurentMap {
 public:
  LaurentMap() = default;
  LaurentMap(int lowest, Eigen::MatrixXcd coeffs) : lowest_(lowest), coeffs_(std::move(coeffs)) {}

  static LaurentMap zero(int dimension) { return LaurentMap(0, Eigen::MatrixXcd::Zero(dimension, 1)); }

  int dimension() const { return static_cast<int>(coeffs_.rows()); }
  int lowest() const { return lowest_; }
  int highest() const { return lowest_ + static_cast<int>(coeffs_.cols()) - 1; }
  const Eigen::MatrixXcd& coeffs() const { return coeffs_; }
  Eigen::MatrixXcd& coeffs() { return coeffs_; }

  Complex coefficient(int coordinate, int p) const;
  LaurentSeries row(int coordinate) const;

  Eigen::VectorXcd eval(Complex x) const;
  Eigen::VectorXcd derivative(Complex x) const;

  LaurentMap trimmed(double tol = 0.0) const;

 private:
  int lowest_ = 0;
  Eigen::MatrixXcd coeffs_;
};

LaurentMap operator+(const LaurentMap& a, const LaurentMap& b);
LaurentMap operator*(const LaurentMap& a, const LaurentSeries& s);
LaurentMap operator*(Complex k, const LaurentMap& a);

}  // namespace holopush
