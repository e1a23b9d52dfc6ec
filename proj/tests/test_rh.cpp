#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "holopush/error.hpp"
#include "holopush/rh.hpp"

using namespace holopush;

namespace {

constexpr double kPi = std::numbers::pi;

// Curve family sampled on a K x A grid from log R_k(theta).
template <typename F>
CurveFamily family_from(int K, int A, F log_r) {
  Eigen::MatrixXd R(K, A);
  for (int k = 0; k < K; ++k)
    for (int a = 0; a < A; ++a) R(k, a) = std::exp(log_r(2.0 * kPi * k / K, 2.0 * kPi * a / A));
  return curve_family_from_radii({R});
}

Divisor at_zero(int order) { return Divisor{{{0.0, order}}}; }

double max_zeta_error(const RHSolution& sol, const std::function<Complex(Complex)>& target) {
  double worst = 0.0;
  for (int i = 0; i <= 16; ++i)
    for (int a = 0; a < 64; ++a) {
      const Complex x = std::polar(i / 16.0, 2.0 * kPi * a / 64);
      worst = std::max(worst, std::abs(sol.eval(x) - target(x)));
    }
  return worst;
}

// Schwarz integral (1/2pi) int (e^{it} + x)/(e^{it} - x) u(t) dt by the trapezoid rule.
Complex schwarz_integral(const std::function<double(double)>& u, Complex x, int nodes = 8192) {
  Complex acc = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double t = 2.0 * kPi * j / nodes;
    const Complex e = std::polar(1.0, t);
    acc += (e + x) / (e - x) * u(t);
  }
  return acc / static_cast<double>(nodes);
}

}  // namespace

TEST_CASE("blaschke boundary values") {
  const BlaschkeBoundary b3 = blaschke_boundary(at_zero(3), 256);
  CHECK(b3.winding == 3);
  for (int k = 0; k < 256; ++k) CHECK(std::abs(b3.values[k] - std::polar(1.0, 3.0 * 2.0 * kPi * k / 256)) < 1e-14);

  const BlaschkeBoundary bh = blaschke_boundary(Divisor{{{0.5, 1}}}, 256);
  CHECK(std::abs(bh.values[0] - Complex(1.0)) < 1e-15);

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  Divisor random;
  for (int i = 0; i < 4; ++i) random.points.push_back({Complex(U(gen), U(gen)), 1 + i % 2});
  const BlaschkeBoundary br = blaschke_boundary(random, 256);
  CHECK(br.winding == 6);
  CHECK((br.values.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
  // The lifted argument closes up after w turns.
  for (int k = 0; k < 256; ++k) CHECK(std::abs(std::polar(1.0, br.arg[k]) - br.values[k]) < 1e-12);

  CHECK_THROWS_AS(blaschke_boundary(Divisor{{{Complex(0.0, 1.0), 1}}}, 256), Error);
}

TEST_CASE("divisor bookkeeping") {
  Divisor d{{{0.0, 2}, {0.3, 1}}};
  CHECK(d.total_degree() == 3);
  CHECK(d.order_at(0.0) == 2);
  CHECK(d.with_min_order(0.0, 5).order_at(0.0) == 5);
  CHECK(d.with_min_order(0.0, 1).order_at(0.0) == 2);
  CHECK(d.with_min_order(Complex(0.0, 0.2), 1).total_degree() == 4);
  SurfaceSpec disc;
  CHECK_NOTHROW(d.validate(disc));
  try {
    Divisor{{{0.97, 1}}}.validate(disc);
    FAIL("expected a divisor error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Divisor);
  }
  CHECK_THROWS_AS(Divisor{}.validate(disc), Error);
}

TEST_CASE("constant circles give a monomial times a constant") {
  const CurveFamily fam = family_from(256, 64, [](double, double) { return std::log(0.6); });
  const RHSolution sol = solve_rh(fam, at_zero(3));
  const Complex phase = sol.eval(1.0) / 0.6;
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
  CHECK(max_zeta_error(sol, [&](Complex x) { return 0.6 * phase * x * x * x; }) <= 1e-8);
  CHECK(sol.residual <= 1e-10);
  CHECK(sol.winding_defect == 0);
  CHECK(sol.holomorphy_defect <= 1e-8);
  // Gauge mean(theta - 3 s) = 0 fixes the rotation to 1.
  CHECK(std::abs(phase - Complex(1.0)) < 1e-12);
}

TEST_CASE("theta-dependent family built from a known solution is recovered") {
  // Target 0.6 x^3 exp(0.1 x): on |x| = 1 its angle is 3s + 0.1 sin s and its modulus 0.6 exp(0.1 cos s).
  auto target = [](Complex x) { return 0.6 * x * x * x * std::exp(0.1 * x); };
  const CurveFamily fam = family_from(256, 64, [](double s, double th) {
    const double th_star = 3.0 * s + 0.1 * std::sin(s);
    return std::log(0.6) + 0.1 * std::cos(s) + 0.05 * std::sin(th - th_star);
  });
  const auto t0 = std::chrono::steady_clock::now();
  const RHSolution sol = solve_rh(fam, at_zero(3));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(max_zeta_error(sol, target) <= 1e-8);
  CHECK(sol.residual <= 1e-8);
  CHECK(sol.holomorphy_defect <= 1e-8);
  CHECK(sol.iterations < 200);
  CHECK(seconds < 10.0);
  bool newton = false;
  for (const auto& row : sol.trace) newton = newton || row.step == "newton";
  CHECK(newton);
}

TEST_CASE("theta-independent family matches the Schwarz integral") {
  auto radius = [](double s) { return 0.6 + 0.02 * std::cos(s); };
  const CurveFamily fam = family_from(256, 64, [&](double s, double) { return std::log(radius(s)); });
  const RHSolution sol = solve_rh(fam, at_zero(3));
  for (int k = 0; k < 256; ++k) {
    const double s = 2.0 * kPi * k / 256;
    CHECK(std::abs(std::abs(sol.eval(std::polar(1.0, s))) - radius(s)) <= 1e-8);
  }
  const std::function<double(double)> u = [&](double t) { return std::log(radius(t)); };
  for (const Complex x : {Complex(0.3, 0.1), Complex(-0.5, 0.4), Complex(0.0, -0.8), Complex(0.7, 0.0)}) {
    const double oracle = std::pow(std::abs(x), 3) * std::exp(schwarz_integral(u, x).real());
    CHECK(std::abs(std::abs(sol.eval(x)) - oracle) <= 1e-8);
  }
  CHECK(sol.holomorphy_defect <= 1e-8);
}

TEST_CASE("divisor zeros away from the origin") {
  const CurveFamily fam = family_from(256, 64, [](double s, double) { return std::log(0.6 + 0.02 * std::cos(s)); });
  const Complex a(0.3, -0.2);
  const RHSolution sol = solve_rh(fam, Divisor{{{0.0, 1}, {a, 2}}});
  CHECK(std::abs(sol.eval(a)) < 1e-14);
  // Double zero: the coefficient series also vanishes to second order.
  CHECK(std::abs(sol.coeffs.eval(a)) < 1e-12);
  CHECK(std::abs(sol.coeffs.derivative(a)) < 1e-11);
  CHECK(sol.winding_defect == 0);
  CHECK(sol.residual <= 1e-9);
  CHECK(sol.holomorphy_defect <= 1e-8);
}

TEST_CASE("solution invariants") {
  const CurveFamily fam = family_from(256, 64, [](double s, double th) {
    return std::log(0.55) + 0.08 * std::cos(s) + 0.04 * std::cos(th + s);
  });
  const RHSolution sol = solve_rh(fam, at_zero(2));

  SUBCASE("coefficients reproduce the factorization") {
    for (const Complex x : {Complex(0.2, 0.3), Complex(-0.9, 0.1), Complex(0.0, 1.0)})
      CHECK(std::abs(sol.coeffs.eval(x) - sol.eval(x)) < 1e-12);
  }
  SUBCASE("maximum principle on a 64 x 64 grid") {
    double boundary = 0.0, interior = 0.0;
    for (int a = 0; a < 64; ++a) boundary = std::max(boundary, std::abs(sol.eval(std::polar(1.0, 2.0 * kPi * a / 64))));
    for (int i = 0; i < 64; ++i)
      for (int a = 0; a < 64; ++a)
        interior = std::max(interior, std::abs(sol.eval(std::polar(i / 64.0, 2.0 * kPi * a / 64))));
    CHECK(interior <= boundary + 1e-10);
    CHECK(interior < 1.0);
  }
  SUBCASE("null-homotopic change of the initial guess gives the same map") {
    Eigen::VectorXd offset(256);
    for (int k = 0; k < 256; ++k) offset[k] = 0.3 * std::sin(2.0 * kPi * k / 256) + 0.1;
    RHOptions opts;
    opts.initial_offset = &offset;
    const RHSolution other = solve_rh(fam, at_zero(2), opts);
    CHECK(max_zeta_error(other, [&](Complex x) { return sol.eval(x); }) <= 1e-9);
  }
  SUBCASE("factorization round-trips through JSON") {
    const RHSolution back = rh_factorization_from_json(nlohmann::json::parse(rh_factorization_to_json(sol).dump()));
    CHECK(max_zeta_error(back, [&](Complex x) { return sol.eval(x); }) == 0.0);
    CHECK(back.coeffs.coeffs() == sol.coeffs.coeffs());
  }
}

TEST_CASE("nonconvergence is reported with the defect history") {
  const CurveFamily fam = family_from(256, 64, [](double s, double th) {
    return std::log(0.6) + 0.1 * std::cos(s) + 0.05 * std::sin(th - 3.0 * s);
  });
  std::vector<RHTraceRow> rows;
  RHOptions opts;
  opts.max_iter = 2;
  opts.tol = 1e-14;
  opts.trace = &rows;
  try {
    solve_rh(fam, at_zero(3), opts);
    FAIL("expected nonconvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Nonconvergence);
    CHECK(std::string(e.what()).find("defect history") != std::string::npos);
  }
  CHECK(rows.size() == 2);
}

TEST_CASE("zero count from the decay bound") {
  CHECK(predicted_zero_order(0.6, 0.5, 0.01) == 7);
  CHECK(predicted_zero_order(0.6, 0.5, 0.05) == 5);
  CHECK(predicted_zero_order(0.6, 0.5, 0.7) == 0);

  const CurveFamily fam = family_from(256, 64, [](double s, double) { return std::log(0.6 + 0.02 * std::cos(s)); });
  SUBCASE("predicted order suffices and is verified") {
    const SmallnessResult r = smallness_by_zeros_solved(fam, at_zero(1), 0.5, 0.01);
    CHECK(r.predicted_order == 7);
    CHECK(r.divisor.order_at(0.0) == 7);
    CHECK(r.history.back().second < 0.01);
    CHECK(sup_on_disc(r.solution, 0.5) < 0.01);
  }
  SUBCASE("eps above the curve radii keeps the base divisor") {
    const Divisor base{{{0.2, 1}}};
    const Divisor out = smallness_by_zeros(fam, base, 0.5, 0.7);
    REQUIRE(out.points.size() == 1);
    CHECK(out.points[0].location == Complex(0.2));
    CHECK(out.points[0].order == 1);
  }
  SUBCASE("shrinking compact with a zero at the center") {
    const RHSolution sol = solve_rh(fam, at_zero(1));
    double prev = 1.0;
    for (double radius : {0.4, 0.1, 0.01, 0.0}) {
      const double sup = sup_on_disc(sol, radius);
      CHECK(sup <= prev);
      prev = sup;
    }
    CHECK(prev == 0.0);
  }
}

TEST_CASE("annulus with constant circles") {
  const int K = 128;
  auto annulus_family = [&](double outer, double inner) {
    Eigen::MatrixXd Ro = Eigen::MatrixXd::Constant(K, 64, outer);
    Eigen::MatrixXd Ri = Eigen::MatrixXd::Constant(K, 64, inner);
    return curve_family_from_radii({Ro, Ri});
  };
  SUBCASE("integral index: a monomial") {
    const RHSolution sol = solve_rh_annulus(annulus_family(0.6, 0.3), 0.5);
    CHECK(sol.monomial_order == 1);
    CHECK_FALSE(sol.annulus_zero.has_value());
    CHECK(sol.period_residual <= 1e-6);
    const Complex phase = sol.eval(1.0) / 0.6;
    for (const Complex x : {Complex(0.7, 0.1), Complex(-0.2, 0.6), Complex(0.0, -0.95)})
      CHECK(std::abs(sol.eval(x) - 0.6 * phase * x) < 1e-10);
  }
  SUBCASE("non-integral index: an extra zero in the annulus") {
    const RHSolution sol = solve_rh_annulus(annulus_family(0.6, 0.2), 0.5);
    CHECK(sol.monomial_order == 1);
    REQUIRE(sol.annulus_zero.has_value());
    CHECK(*sol.annulus_zero == doctest::Approx(std::pow(0.5, std::log(3.0) / std::log(2.0) - 1.0)).epsilon(1e-9));
    CHECK(sol.period_residual <= 1e-6);
    CHECK(sol.residual <= 1e-8);
    for (int k = 0; k < K; ++k) {
      const double s = 2.0 * kPi * k / K;
      CHECK(std::abs(std::abs(sol.coeffs.eval(std::polar(1.0, s))) - 0.6) < 1e-9);
      CHECK(std::abs(std::abs(sol.coeffs.eval(std::polar(0.5, s))) - 0.2) < 1e-9);
    }
  }
}
