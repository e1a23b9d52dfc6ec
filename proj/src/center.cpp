#include "holopush/center.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "holopush/error.hpp"
#include "holopush/fourier.hpp"
#include "holopush/parallel.hpp"

namespace holopush {

Complex SurfaceSpec::boundary_point(int component, int k) const {
  return std::polar(component_radius(component), 2.0 * std::numbers::pi * k / K);
}

bool SurfaceSpec::contains(Complex x, double slack) const {
  const double r = std::abs(x);
  if (r > 1.0 + slack) return false;
  return kind == SurfaceKind::Disc || r >= inner_radius - slack;
}

void SurfaceSpec::validate() const {
  if (!is_power_of_two(K) || K < 64)
    throw Error(ErrorKind::Schema, "center_family.surface", "surface.K must be a power of two >= 64");
  if (kind == SurfaceKind::Annulus && (inner_radius < 0.1 || inner_radius > 0.9))
    throw Error(ErrorKind::Schema, "center_family.surface", "surface.inner_radius must lie in [0.1, 0.9]");
}

CenterFamily sample_h(const DefiningFunction& df, const SurfaceSpec& surface, const std::vector<BoundaryFrame>& frames,
                      const LaurentMap& f1, double c, int J) {
  const char* stage = "center_family.sample_h";
  if (static_cast<int>(frames.size()) != surface.components())
    throw Error(ErrorKind::Argument, stage, "one frame per boundary component is required");
  if (J < 1) throw Error(ErrorKind::Argument, stage, "J must be positive");

  CenterFamily cf;
  cf.surface = surface;
  cf.J = J;
  cf.f1 = f1;
  cf.scale = c;
  const int n = df.dimension();
  const int K = surface.K;
  cf.h_samples.assign(surface.components(), std::vector<Eigen::MatrixXcd>(J + 1, Eigen::MatrixXcd(n, K)));

  for (int comp = 0; comp < surface.components(); ++comp) {
    if (frames[comp].size() != K) throw Error(ErrorKind::Argument, stage, "frame size does not match the grid");
    auto& cols = cf.h_samples[comp];
    parallel_for(static_cast<std::size_t>(K), [&](std::size_t kk) {
      const int k = static_cast<int>(kk);
      const CxPoint z = f1.eval(surface.boundary_point(comp, k));
      const QuadricDisc disc = build_disc(df, z, frames[comp].vectors[k], c);
      for (int j = 0; j <= J; ++j) cols[j].col(k) = disc.coefficient(j);
    });
  }
  return cf;
}

namespace {

// Uniform in [-1, 1) from raw engine bits, identical on every platform.
double unit_draw(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0;
}

}  // namespace

void perturb_h(CenterFamily& cf, double amplitude, std::uint64_t seed) {
  if (amplitude == 0.0) return;
  std::mt19937_64 gen(seed);
  const int n = cf.dimension();
  for (int j = 2; j <= std::min(4, cf.J); ++j) {
    CxPoint a(n), b(n);
    for (int i = 0; i < n; ++i) a[i] = Complex(unit_draw(gen), unit_draw(gen));
    for (int i = 0; i < n; ++i) b[i] = Complex(unit_draw(gen), unit_draw(gen));
    const double norm = std::max(1e-300, a.norm() + b.norm());
    for (int comp = 0; comp < cf.surface.components(); ++comp)
      for (int k = 0; k < cf.surface.K; ++k) {
        const Complex x = cf.surface.boundary_point(comp, k);
        cf.h_samples[comp][j].col(k) += amplitude * (a + b * x) / norm;
      }
  }
}

CenterFamily fit_surrogate(const CenterFamily& cf, int N, int d_minus, int d_plus) {
  const char* stage = "center_family.fit_surrogate";
  if (cf.h_samples.empty()) throw Error(ErrorKind::Argument, stage, "no boundary samples to fit");
  if (N < 1 || N > cf.J) throw Error(ErrorKind::Argument, stage, "retained order N must satisfy 1 <= N <= J");
  if (d_minus < 0 || d_plus < 0) throw Error(ErrorKind::Argument, stage, "degrees must be non-negative");

  const int n = cf.dimension();
  const int K = cf.surface.K;
  const int comps = cf.surface.components();
  const int M = comps * K;

  Eigen::MatrixXcd rhs(M, N * n);
  for (int comp = 0; comp < comps; ++comp)
    for (int j = 1; j <= N; ++j)
      rhs.block(comp * K, (j - 1) * n, K, n) = cf.h_samples[comp][j].transpose();

  for (;;) {
    const int P = d_minus + d_plus + 1;
    Eigen::MatrixXcd A(M, P);
    for (int comp = 0; comp < comps; ++comp)
      for (int k = 0; k < K; ++k) {
        const Complex x = cf.surface.boundary_point(comp, k);
        for (int p = 0; p < P; ++p) A(comp * K + k, p) = std::pow(x, p - d_minus);
      }
    const Eigen::MatrixXcd G = A.adjoint() * A;
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(G, Eigen::EigenvaluesOnly).eigenvalues();
    const double condition = ev.maxCoeff() / std::max(ev.minCoeff(), 1e-300);
    if (condition > 1e12) {
      if (d_minus == 0 && d_plus == 0) {
        std::ostringstream os;
        os << "normal equations ill-conditioned (condition " << condition << ") even at degree 0";
        throw Error(ErrorKind::Fit, stage, os.str());
      }
      d_minus /= 2;
      d_plus /= 2;
      continue;
    }

    const Eigen::MatrixXcd X = A.colPivHouseholderQr().solve(rhs);
    CenterFamily out = cf;
    out.d_minus = d_minus;
    out.d_plus = d_plus;
    out.condition = condition;
    out.surrogate.clear();
    for (int j = 1; j <= N; ++j)
      out.surrogate.emplace_back(-d_minus, X.middleCols((j - 1) * n, n).transpose());
    out.fit_error = surrogate_fit_error(out, out.report_radius);
    return out;
  }
}

double surrogate_fit_error(const CenterFamily& cf, double r) {
  double worst = 0.0;
  for (int comp = 0; comp < cf.surface.components(); ++comp)
    for (int k = 0; k < cf.surface.K; ++k) {
      const Complex x = cf.surface.boundary_point(comp, k);
      double sum = 0.0, rj = 1.0;
      for (int j = 1; j <= cf.J; ++j) {
        rj *= r;
        const CxPoint Hj = j <= cf.N() ? CxPoint(cf.surrogate[j - 1].eval(x)) : CxPoint(CxPoint::Zero(cf.dimension()));
        sum += (Hj - cf.h_samples[comp][j].col(k)).norm() * rj;
      }
      worst = std::max(worst, sum);
    }
  return worst;
}

Eigen::VectorXcd eval_H(const CenterFamily& cf, Complex x, Complex zeta) {
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(cf.dimension());
  for (int j = cf.N(); j >= 1; --j) acc = (acc + cf.surrogate[j - 1].eval(x)) * zeta;
  return cf.f1.eval(x) + acc;
}

Eigen::VectorXcd eval_H_dzeta(const CenterFamily& cf, Complex x, Complex zeta) {
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(cf.dimension());
  for (int j = cf.N(); j >= 1; --j) acc = acc * zeta + static_cast<double>(j) * cf.surrogate[j - 1].eval(x);
  return acc;
}

nlohmann::json surrogate_to_json(const CenterFamily& cf) {
  nlohmann::json out = nlohmann::json::array();
  auto emit = [&](int j, const LaurentMap& m) {
    for (int i = 0; i < m.dimension(); ++i)
      for (int p = m.lowest(); p <= m.highest(); ++p) {
        const Complex c = m.coefficient(i, p);
        if (c == Complex(0.0)) continue;
        out.push_back({{"j", j}, {"coordinate", i}, {"exponent", p}, {"re", c.real()}, {"im", c.imag()}});
      }
  };
  emit(0, cf.f1);
  for (int j = 1; j <= cf.N(); ++j) emit(j, cf.surrogate[j - 1]);
  return out;
}

CenterFamily surrogate_from_json(const nlohmann::json& dump, int dimension, const SurfaceSpec& surface) {
  const char* stage = "center_family.load";
  if (!dump.is_array()) throw Error(ErrorKind::Schema, stage, "surrogate dump must be a JSON array");
  struct Range {
    int lo = 0, hi = 0;
    bool seen = false;
  };
  std::map<int, Range> ranges;
  for (const auto& e : dump) {
    const int j = e.at("j").get<int>();
    const int i = e.at("coordinate").get<int>();
    const int p = e.at("exponent").get<int>();
    if (j < 0 || i < 0 || i >= dimension) throw Error(ErrorKind::Schema, stage, "surrogate entry out of range");
    auto& r = ranges[j];
    r.lo = r.seen ? std::min(r.lo, p) : p;
    r.hi = r.seen ? std::max(r.hi, p) : p;
    r.seen = true;
  }
  const int N = ranges.empty() ? 0 : ranges.rbegin()->first;
  std::vector<LaurentMap> maps(N + 1, LaurentMap::zero(dimension));
  for (const auto& [j, r] : ranges) maps[j] = LaurentMap(r.lo, Eigen::MatrixXcd::Zero(dimension, r.hi - r.lo + 1));
  for (const auto& e : dump) {
    const int j = e.at("j").get<int>();
    LaurentMap& m = maps[j];
    m.coeffs()(e.at("coordinate").get<int>(), e.at("exponent").get<int>() - m.lowest()) =
        Complex(e.at("re").get<double>(), e.at("im").get<double>());
  }
  CenterFamily cf;
  cf.surface = surface;
  cf.f1 = maps[0];
  cf.surrogate.assign(maps.begin() + 1, maps.end());
  cf.J = std::max(N, 1);
  return cf;
}

}  // namespace holopush
