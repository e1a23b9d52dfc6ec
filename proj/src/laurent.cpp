#include "holopush/laurent.hpp"

#include <algorithm>

namespace holopush {

LaurentSeries LaurentSeries::monomial(int exponent, Complex c) {
  Eigen::VectorXcd v(1);
  v[0] = c;
  return LaurentSeries(exponent, v);
}

Complex LaurentSeries::operator[](int p) const {
  const int idx = p - lowest_;
  if (idx < 0 || idx >= coeffs_.size()) return 0.0;
  return coeffs_[idx];
}

Complex LaurentSeries::eval(Complex x) const {
  if (coeffs_.size() == 0) return 0.0;
  Complex acc = 0.0;
  for (Eigen::Index i = coeffs_.size() - 1; i >= 0; --i) acc = acc * x + coeffs_[i];
  return lowest_ == 0 ? acc : acc * std::pow(x, lowest_);
}

Complex LaurentSeries::derivative(Complex x) const {
  if (coeffs_.size() == 0) return 0.0;
  // sum p c_p x^(p-1), Horner over the shifted index.
  Complex acc = 0.0;
  if (lowest_ == 0) {
    for (Eigen::Index i = coeffs_.size() - 1; i >= 1; --i) acc = acc * x + static_cast<double>(i) * coeffs_[i];
    return acc;
  }
  for (Eigen::Index i = coeffs_.size() - 1; i >= 0; --i)
    acc = acc * x + static_cast<double>(lowest_ + i) * coeffs_[i];
  return acc * std::pow(x, lowest_ - 1);
}

LaurentSeries LaurentSeries::trimmed(double tol) const {
  Eigen::Index lo = 0, hi = coeffs_.size() - 1;
  while (lo <= hi && std::abs(coeffs_[lo]) <= tol) ++lo;
  while (hi >= lo && std::abs(coeffs_[hi]) <= tol) --hi;
  if (lo > hi) return LaurentSeries(0, Eigen::VectorXcd::Zero(1));
  return LaurentSeries(lowest_ + static_cast<int>(lo), coeffs_.segment(lo, hi - lo + 1));
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.empty() || b.empty()) return LaurentSeries();
  const Eigen::Index na = a.coeffs().size(), nb = b.coeffs().size();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(na + nb - 1);
  for (Eigen::Index i = 0; i < na; ++i) {
    const Complex ai = a.coeffs()[i];
    if (ai == Complex(0.0)) continue;
    c.segment(i, nb) += ai * b.coeffs();
  }
  return LaurentSeries(a.lowest() + b.lowest(), std::move(c));
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  const int lo = std::min(a.lowest(), b.lowest());
  const int hi = std::max(a.highest(), b.highest());
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(hi - lo + 1);
  c.segment(a.lowest() - lo, a.coeffs().size()) += a.coeffs();
  c.segment(b.lowest() - lo, b.coeffs().size()) += b.coeffs();
  return LaurentSeries(lo, std::move(c));
}

// ---------------------------------------------------------------------------

Complex LaurentMap::coefficient(int coordinate, int p) const {
  const int idx = p - lowest_;
  if (idx < 0 || idx >= coeffs_.cols()) return 0.0;
  return coeffs_(coordinate, idx);
}

LaurentSeries LaurentMap::row(int coordinate) const {
  return LaurentSeries(lowest_, coeffs_.row(coordinate).transpose());
}

Eigen::VectorXcd LaurentMap::eval(Complex x) const {
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(coeffs_.rows());
  for (Eigen::Index i = coeffs_.cols() - 1; i >= 0; --i) acc = acc * x + coeffs_.col(i);
  return lowest_ == 0 ? acc : Eigen::VectorXcd(acc * std::pow(x, lowest_));
}

Eigen::VectorXcd LaurentMap::derivative(Complex x) const {
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(coeffs_.rows());
  if (lowest_ == 0) {
    for (Eigen::Index i = coeffs_.cols() - 1; i >= 1; --i) acc = acc * x + static_cast<double>(i) * coeffs_.col(i);
    return acc;
  }
  for (Eigen::Index i = coeffs_.cols() - 1; i >= 0; --i)
    acc = acc * x + static_cast<double>(lowest_ + i) * coeffs_.col(i);
  return acc * std::pow(x, lowest_ - 1);
}

LaurentMap LaurentMap::trimmed(double tol) const {
  Eigen::Index lo = 0, hi = coeffs_.cols() - 1;
  auto col_small = [&](Eigen::Index i) { return coeffs_.col(i).cwiseAbs().maxCoeff() <= tol; };
  while (lo <= hi && col_small(lo)) ++lo;
  while (hi >= lo && col_small(hi)) --hi;
  if (lo > hi) return zero(dimension());
  return LaurentMap(lowest_ + static_cast<int>(lo), coeffs_.middleCols(lo, hi - lo + 1));
}

LaurentMap operator+(const LaurentMap& a, const LaurentMap& b) {
  if (a.coeffs().size() == 0) return b;
  if (b.coeffs().size() == 0) return a;
  const int lo = std::min(a.lowest(), b.lowest());
  const int hi = std::max(a.highest(), b.highest());
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(a.dimension(), hi - lo + 1);
  c.middleCols(a.lowest() - lo, a.coeffs().cols()) += a.coeffs();
  c.middleCols(b.lowest() - lo, b.coeffs().cols()) += b.coeffs();
  return LaurentMap(lo, std::move(c));
}

LaurentMap operator*(const LaurentMap& a, const LaurentSeries& s) {
  if (s.empty() || a.coeffs().size() == 0) return LaurentMap::zero(a.dimension());
  const Eigen::Index na = a.coeffs().cols(), ns = s.coeffs().size();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(a.dimension(), na + ns - 1);
  for (Eigen::Index i = 0; i < ns; ++i) {
    const Complex si = s.coeffs()[i];
    if (si == Complex(0.0)) continue;
    c.middleCols(i, na) += si * a.coeffs();
  }
  return LaurentMap(a.lowest() + s.lowest(), std::move(c));
}

LaurentMap operator*(Complex k, const LaurentMap& a) { return LaurentMap(a.lowest(), k * a.coeffs()); }

}  // namespace holopush
