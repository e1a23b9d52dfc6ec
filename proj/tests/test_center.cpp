#include <doctest.h>

#include <cmath>
#include <numbers>

#include "holopush/center.hpp"
#include "holopush/error.hpp"
#include "holopush/fourier.hpp"

using namespace holopush;

namespace {

constexpr double kPi = std::numbers::pi;

CxPoint point(std::initializer_list<Complex> xs) {
  CxPoint z(static_cast<long>(xs.size()));
  long i = 0;
  for (Complex x : xs) z[i++] = x;
  return z;
}

// (a x, b) as a polynomial map.
LaurentMap linear_map(Complex a, Complex b) {
  Eigen::MatrixXcd c(2, 2);
  c << 0.0, a, b, 0.0;
  return LaurentMap(0, c);
}

std::vector<CxPoint> boundary_values(const LaurentMap& f, const SurfaceSpec& s, int comp = 0) {
  std::vector<CxPoint> out;
  for (int k = 0; k < s.K; ++k) out.push_back(f.eval(s.boundary_point(comp, k)));
  return out;
}

PolynomialDefiningFunction cubic_ball() {
  return PolynomialDefiningFunction(
      2, {{{1, 0}, {1, 0}, 1.0}, {{0, 1}, {0, 1}, 1.0}, {{0, 0}, {0, 0}, -1.0}, {{0, 3}, {0, 0}, 0.2}}, 3.0);
}

// Center family with hand-made samples h_j(x) on the grid.
CenterFamily synthetic(const SurfaceSpec& s, const LaurentMap& f1, int J,
                       const std::function<CxPoint(int, Complex)>& hj) {
  CenterFamily cf;
  cf.surface = s;
  cf.J = J;
  cf.f1 = f1;
  cf.h_samples.assign(s.components(), std::vector<Eigen::MatrixXcd>(J + 1, Eigen::MatrixXcd(2, s.K)));
  for (int comp = 0; comp < s.components(); ++comp)
    for (int j = 0; j <= J; ++j)
      for (int k = 0; k < s.K; ++k) {
        const Complex x = s.boundary_point(comp, k);
        cf.h_samples[comp][j].col(k) = j == 0 ? CxPoint(f1.eval(x)) : hj(j, x);
      }
  return cf;
}

}  // namespace

TEST_CASE("ball samples are the affine discs") {
  const auto ball = QuadraticDefiningFunction::ball(2);
  SurfaceSpec s;
  s.K = 64;
  const LaurentMap f1 = linear_map(0.9, 0.0);
  const auto f1b = boundary_values(f1, s);
  const BoundaryFrame frame = build_frame(ball, f1b);
  const CenterFamily cf = sample_h(ball, s, {frame}, f1, 0.8, 24);
  for (int k = 0; k < s.K; ++k) {
    CHECK(cf.h_samples[0][0].col(k) == f1b[k]);
    CHECK((cf.h_samples[0][1].col(k) - point({0.0, 0.8})).norm() <= 1e-15);
    for (int j = 2; j <= 24; ++j) CHECK(cf.h_samples[0][j].col(k).norm() == 0.0);
  }
  const CenterFamily fit = fit_surrogate(cf, 12, 0, 16);
  CHECK(fit.fit_error <= 1e-14);
  CHECK(fit.surrogate[0].trimmed(1e-14).highest() == 0);
  CHECK((fit.surrogate[0].trimmed(1e-14).coefficient(1, 0) - 0.8).real() == doctest::Approx(0.0).epsilon(1e-14));
  const Complex x = s.boundary_point(0, 5);
  CHECK((eval_H(fit, x, 0.0) - f1.eval(x)).norm() == 0.0);
  CHECK((eval_H(fit, x, 0.4) - (f1.eval(x) + 0.4 * point({0.0, 0.8}))).norm() <= 1e-14);
}

TEST_CASE("samples of a curved domain match Cauchy coefficients") {
  const auto df = cubic_ball();
  SurfaceSpec s;
  s.K = 64;
  const LaurentMap f1 = linear_map(0.9, 0.0);
  const auto f1b = boundary_values(f1, s);
  const BoundaryFrame frame = build_frame(df, f1b);
  const CenterFamily cf = sample_h(df, s, {frame}, f1, 0.8, 24);
  for (int k : {0, 17, 40}) {
    const QuadricDisc disc = build_disc(df, f1b[k], frame.vectors[k], 0.8);
    Eigen::VectorXcd vals(32);
    for (int i = 0; i < 2; ++i) {
      for (int q = 0; q < 32; ++q) vals[q] = disc(std::polar(1.0, 2.0 * kPi * q / 32))[i];
      const Eigen::VectorXcd c = cauchy_coeffs(vals);
      CHECK(std::abs(c[2] - cf.h_samples[0][2](i, k)) <= 1e-10);
    }
  }
}

TEST_CASE("least-squares fits") {
  SurfaceSpec s;
  s.K = 64;
  const LaurentMap f1 = linear_map(0.9, 0.0);

  SUBCASE("polynomial samples are recovered") {
    const CenterFamily cf = synthetic(s, f1, 4, [](int j, Complex x) {
      return point({1.0 / j + 0.5 * std::pow(x, j), Complex(0.0, 0.2) * x * x});
    });
    const CenterFamily fit = fit_surrogate(cf, 4, 0, 8);
    CHECK(fit.fit_error <= 1e-12);
    CHECK(std::abs(fit.surrogate[2].coefficient(0, 3) - 0.5) <= 1e-12);
    CHECK(std::abs(fit.surrogate[2].coefficient(1, 2) - Complex(0.0, 0.2)) <= 1e-12);
  }
  SUBCASE("a rotating frame fits a single mode") {
    const CenterFamily cf = synthetic(s, f1, 1, [](int, Complex x) { return point({0.0, 0.8 * x}); });
    const CenterFamily fit = fit_surrogate(cf, 1, 0, 16);
    CHECK(fit.fit_error <= 1e-12);
    CHECK(std::abs(fit.surrogate[0].coefficient(1, 1) - 0.8) <= 1e-12);
  }
  SUBCASE("fit error never grows when the degree doubles") {
    const CenterFamily cf = synthetic(s, f1, 3, [](int j, Complex x) {
      return point({std::exp(x) / (3.0 + j), 1.0 / (2.0 - 0.6 * x)});
    });
    double prev = std::numeric_limits<double>::infinity();
    for (int d : {1, 2, 4, 8, 16}) {
      const double err = fit_surrogate(cf, 3, 0, d).fit_error;
      CHECK(err <= prev + 1e-15);
      prev = err;
    }
    CHECK(prev <= 1e-6);
  }
  SUBCASE("aliased bases are reduced") {
    const CenterFamily cf = synthetic(s, f1, 1, [](int, Complex x) { return point({x, 0.0}); });
    const CenterFamily fit = fit_surrogate(cf, 1, 0, 100);
    CHECK(fit.d_plus == 50);
    CHECK(fit.condition <= 1e12);
  }
  SUBCASE("bad arguments") {
    const CenterFamily cf = synthetic(s, f1, 2, [](int, Complex) { return point({0.0, 0.0}); });
    CHECK_THROWS_AS(fit_surrogate(cf, 3, 0, 4), Error);
  }
}

TEST_CASE("surrogate stays close to the samples on a curved domain") {
  const auto df = cubic_ball();
  SurfaceSpec s;
  s.K = 64;
  const LaurentMap f1 = linear_map(0.9, 0.0);
  const auto f1b = boundary_values(f1, s);
  const BoundaryFrame frame = build_frame(df, f1b);
  const CenterFamily cf = sample_h(df, s, {frame}, f1, 0.8, 24);
  const CenterFamily fit = fit_surrogate(cf, 12, 0, 3);
  CHECK(fit.fit_error > 0.0);
  for (int k = 0; k < s.K; k += 7) {
    const Complex x = s.boundary_point(0, k);
    for (int q = 0; q < 8; ++q) {
      const Complex zeta = std::polar(0.5, 2.0 * kPi * q / 8);
      CxPoint h = CxPoint::Zero(2);
      for (int j = 24; j >= 0; --j) h = h * zeta + cf.h_samples[0][j].col(k);
      CHECK((eval_H(fit, x, zeta) - h).norm() <= fit.fit_error);
    }
    // zeta -> H(x, zeta) has degree N.
    Eigen::VectorXcd vals(32);
    for (int q = 0; q < 32; ++q) vals[q] = eval_H(fit, x, std::polar(1.0, 2.0 * kPi * q / 32))[1];
    CHECK(cauchy_coeffs(vals).tail(32 - 13).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("annulus Laurent fit") {
  SurfaceSpec s;
  s.kind = SurfaceKind::Annulus;
  s.inner_radius = 0.5;
  s.K = 64;
  const LaurentMap f1 = linear_map(0.9, 0.0);
  const CenterFamily cf = synthetic(s, f1, 2, [](int j, Complex x) { return point({0.1 * j / x, 0.3 * x + 0.05}); });
  const CenterFamily fit = fit_surrogate(cf, 2, 2, 4);
  CHECK(fit.fit_error <= 1e-12);
  for (int comp = 0; comp < 2; ++comp)
    for (int k = 0; k < s.K; k += 5) {
      const Complex x = s.boundary_point(comp, k);
      for (int j = 1; j <= 2; ++j)
        CHECK((fit.surrogate[j - 1].eval(x) - cf.h_samples[comp][j].col(k)).norm() <= fit.fit_error + 1e-13);
    }
}

TEST_CASE("perturbation and dump") {
  const auto ball = QuadraticDefiningFunction::ball(2);
  SurfaceSpec s;
  s.K = 64;
  const LaurentMap f1 = linear_map(0.9, 0.0);
  const BoundaryFrame frame = build_frame(ball, boundary_values(f1, s));
  const CenterFamily cf = sample_h(ball, s, {frame}, f1, 0.8, 8);
  CenterFamily a = cf, b = cf;
  perturb_h(a, 1e-3, 42);
  perturb_h(b, 1e-3, 42);
  for (int j = 0; j <= 8; ++j) CHECK(a.h_samples[0][j] == b.h_samples[0][j]);
  CHECK(a.h_samples[0][0] == cf.h_samples[0][0]);
  CHECK(a.h_samples[0][1] == cf.h_samples[0][1]);
  CHECK(a.h_samples[0][2] != cf.h_samples[0][2]);
  CHECK((a.h_samples[0][2] - cf.h_samples[0][2]).cwiseAbs().maxCoeff() <= 1e-3);

  const CenterFamily fit = fit_surrogate(a, 6, 0, 4);
  const CenterFamily back = surrogate_from_json(nlohmann::json::parse(surrogate_to_json(fit).dump()), 2, s);
  for (double r : {0.3, 1.0})
    for (int q = 0; q < 8; ++q) {
      const Complex x = std::polar(r, q * 0.8);
      CHECK((eval_H(back, x, 0.3) - eval_H(fit, x, 0.3)).norm() == 0.0);
    }
}
