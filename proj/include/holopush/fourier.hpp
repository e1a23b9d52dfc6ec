#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace holopush {

template <typename Scalar>
using CxVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

// Signed mode number stored at array slot idx of a length-K transform.
inline long signed_mode(long idx, long K) { return idx <= K / 2 ? idx : idx - K; }
inline long mode_slot(long m, long K) { return ((m % K) + K) % K; }

template <typename Scalar = double>
RealVector<Scalar> periodic_grid(long K) {
  RealVector<Scalar> s(K);
  for (long k = 0; k < K; ++k) s[k] = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(k) / Scalar(K);
  return s;
}

// c_m = (1/K) sum_k f_k exp(-i m s_k); slot m holds mode m for m <= K/2, mode m-K above.
template <typename Scalar>
CxVector<Scalar> fourier_coefficients(const CxVector<Scalar>& samples) {
  Eigen::FFT<Scalar> fft;
  CxVector<Scalar> out(samples.size());
  fft.fwd(out, samples);
  out /= Scalar(samples.size());
  return out;
}

template <typename Scalar>
CxVector<Scalar> fourier_coefficients(const RealVector<Scalar>& samples) {
  return fourier_coefficients<Scalar>(CxVector<Scalar>(samples.template cast<std::complex<Scalar>>()));
}

template <typename Scalar>
CxVector<Scalar> fourier_synthesis(const CxVector<Scalar>& coeffs) {
  Eigen::FFT<Scalar> fft;
  CxVector<Scalar> out(coeffs.size());
  fft.inv(out, coeffs);
  out *= Scalar(coeffs.size());
  return out;
}

// Conjugation operator on the circle: multiplier -i sign(m), mode 0 -> 0.
template <typename Scalar>
RealVector<Scalar> harmonic_conjugate(const RealVector<Scalar>& u) {
  const long K = u.size();
  CxVector<Scalar> c = fourier_coefficients<Scalar>(u);
  const std::complex<Scalar> minus_i(0, -1);
  for (long idx = 0; idx < K; ++idx) {
    const long m = signed_mode(idx, K);
    if (m == 0 || 2 * std::abs(m) == K)
      c[idx] = 0;
    else
      c[idx] *= (m > 0 ? minus_i : -minus_i);
  }
  return fourier_synthesis<Scalar>(c).real();
}

// Drops every mode with |m| > max_mode.
template <typename Scalar>
CxVector<Scalar> truncate_modes(const CxVector<Scalar>& samples, long max_mode) {
  const long K = samples.size();
  CxVector<Scalar> c = fourier_coefficients<Scalar>(samples);
  for (long idx = 0; idx < K; ++idx)
    if (std::abs(signed_mode(idx, K)) > max_mode) c[idx] = 0;
  return fourier_synthesis<Scalar>(c);
}

// Taylor coefficients a_0..a_{m-1} of a disc map from its values on the m-th
// roots of unity (discrete Cauchy integrals). Exact for polynomials of degree < m.
CxVector<double> cauchy_coeffs(const CxVector<double>& boundary_values);

}  // namespace holopush
