#include "holopush/rh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "holopush/error.hpp"

namespace holopush {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSameLocation = 1e-14;
constexpr double kMaxDiscLocation = 0.95;

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

double sup_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Discrete winding number of a closed sampled curve avoiding 0.
int discrete_winding(const Eigen::VectorXcd& trace) {
  double total = 0.0;
  const long K = trace.size();
  for (long k = 0; k < K; ++k) total += wrap_angle(std::arg(trace[(k + 1) % K]) - std::arg(trace[k]));
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

// True when consecutive samples of theta (closed up by 2 pi w) stay less than pi apart.
bool angle_indexing_ok(const Eigen::VectorXd& theta, int w) {
  const long K = theta.size();
  for (long k = 0; k < K; ++k) {
    const double next = k + 1 < K ? theta[k + 1] : theta[0] + 2.0 * kPi * w;
    if (!(std::abs(next - theta[k]) < kPi)) return false;
  }
  return true;
}

std::string defect_history(const std::vector<RHTraceRow>& rows) {
  std::ostringstream os;
  const std::size_t from = rows.size() > 8 ? rows.size() - 8 : 0;
  os << "defect history (last " << rows.size() - from << "):";
  for (std::size_t i = from; i < rows.size(); ++i) os << ' ' << rows[i].defect;
  return os.str();
}

Eigen::VectorXd log_radii(const CurveFamily& cfam, int comp, const Eigen::VectorXd& theta) {
  Eigen::VectorXd out(theta.size());
  for (long k = 0; k < theta.size(); ++k) out[k] = cfam.log_radius(comp, static_cast<int>(k), theta[k]);
  return out;
}

Eigen::VectorXd log_radii_dtheta(const CurveFamily& cfam, int comp, const Eigen::VectorXd& theta) {
  Eigen::VectorXd out(theta.size());
  for (long k = 0; k < theta.size(); ++k) out[k] = cfam.log_radius_dtheta(comp, static_cast<int>(k), theta[k]);
  return out;
}

// Sup over the boundary samples of | |zeta| - R_k(arg zeta) |.
double radial_mismatch(const CurveFamily& cfam, int comp, const Eigen::VectorXcd& trace) {
  double worst = 0.0;
  for (long k = 0; k < trace.size(); ++k) {
    const double R = std::exp(cfam.log_radius(comp, static_cast<int>(k), std::arg(trace[k])));
    worst = std::max(worst, std::abs(std::abs(trace[k]) - R));
  }
  return worst;
}

Eigen::VectorXcd boundary_trace(const RHSolution& sol, double radius, int K) {
  Eigen::VectorXcd out(K);
  for (int k = 0; k < K; ++k) out[k] = sol.eval(std::polar(radius, 2.0 * kPi * k / K));
  return out;
}

Complex blaschke_factor(Complex a, Complex x) {
  if (std::abs(a) <= kSameLocation) return x;
  return (x - a) / (1.0 - std::conj(a) * x);
}

double max_abs(const Eigen::VectorXcd& c) { return c.size() ? c.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

int Divisor::total_degree() const {
  int w = 0;
  for (const auto& p : points) w += p.order;
  return w;
}

int Divisor::order_at(Complex a) const {
  int m = 0;
  for (const auto& p : points)
    if (std::abs(p.location - a) <= kSameLocation) m += p.order;
  return m;
}

Divisor Divisor::with_min_order(Complex a, int order) const {
  Divisor out;
  bool found = false;
  for (const auto& p : points) {
    if (std::abs(p.location - a) <= kSameLocation) {
      if (!found) out.points.push_back({a, std::max(order, order_at(a))});
      found = true;
    } else {
      out.points.push_back(p);
    }
  }
  if (!found && order > 0) out.points.push_back({a, order});
  return out;
}

void Divisor::validate(const SurfaceSpec& surface) const {
  const char* stage = "rh_solver.divisor";
  if (total_degree() < 1) throw Error(ErrorKind::Divisor, stage, "divisor must have total degree w >= 1");
  for (const auto& p : points) {
    if (p.order < 1) throw Error(ErrorKind::Divisor, stage, "divisor orders must be >= 1");
    const double r = std::abs(p.location);
    std::ostringstream os;
    os << "divisor point " << p.location;
    if (surface.kind == SurfaceKind::Disc) {
      if (r >= 1.0 - 1e-12) throw Error(ErrorKind::Divisor, stage, os.str() + " lies on or outside the boundary");
      if (r > kMaxDiscLocation) throw Error(ErrorKind::Divisor, stage, os.str() + " has modulus above 0.95");
    } else if (r <= surface.inner_radius || r >= 1.0) {
      throw Error(ErrorKind::Divisor, stage, os.str() + " is not inside the annulus");
    }
  }
}

BlaschkeBoundary blaschke_boundary(const Divisor& div, int K) {
  for (const auto& p : div.points)
    if (std::abs(p.location) >= 1.0 - 1e-12)
      throw Error(ErrorKind::Divisor, "rh_solver.blaschke", "divisor location on the boundary circle");
  BlaschkeBoundary out;
  out.values = Eigen::VectorXcd::Ones(K);
  out.arg = Eigen::VectorXd::Zero(K);
  out.winding = div.total_degree();
  const Eigen::VectorXd s = periodic_grid<double>(K);
  for (int k = 0; k < K; ++k) {
    const Complex x = std::polar(1.0, s[k]);
    for (const auto& p : div.points) {
      out.values[k] *= std::pow(blaschke_factor(p.location, x), p.order);
      // arg((e^{is} - a)/(1 - conj(a) e^{is})) = s - 2 arg(1 - conj(a) e^{is}) with the last term periodic.
      out.arg[k] += p.order * (s[k] - 2.0 * std::arg(1.0 - std::conj(p.location) * x));
    }
  }
  return out;
}

Complex RHSolution::zero_factor(Complex x) const {
  if (kind == SurfaceKind::Disc) {
    Complex acc = 1.0;
    for (const auto& p : divisor.points) acc *= std::pow(blaschke_factor(p.location, x), p.order);
    return acc;
  }
  Complex acc = std::pow(x, monomial_order);
  if (annulus_zero) acc *= x - *annulus_zero;
  return acc;
}

Complex RHSolution::eval(Complex x) const { return zero_factor(x) * std::exp(zerofree_log.eval(x)); }

LaurentSeries zeta_coefficients(const RHSolution& sol) {
  const long L = 4L * sol.K;
  const Eigen::VectorXd s = periodic_grid<double>(L);
  auto phi_samples = [&](double radius) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(L);
    for (int p = sol.zerofree_log.lowest(); p <= sol.zerofree_log.highest(); ++p)
      c[mode_slot(p, L)] += sol.zerofree_log[p] * std::pow(radius, p);
    return fourier_synthesis<double>(c);
  };

  if (sol.kind == SurfaceKind::Disc) {
    int order0 = 0;
    Divisor rest;
    for (const auto& p : sol.divisor.points) {
      if (std::abs(p.location) <= kSameLocation)
        order0 += p.order;
      else
        rest.points.push_back(p);
    }
    const Eigen::VectorXcd phi = phi_samples(1.0);
    Eigen::VectorXcd g(L);
    for (long l = 0; l < L; ++l) {
      const Complex x = std::polar(1.0, s[l]);
      Complex b = 1.0;
      for (const auto& p : rest.points) b *= std::pow(blaschke_factor(p.location, x), p.order);
      g[l] = b * std::exp(phi[l]);
    }
    const Eigen::VectorXcd c = fourier_coefficients<double>(g);
    const LaurentSeries series(order0, c.head(L / 2));
    return series.trimmed(1e-16 * max_abs(c));
  }

  const double r = sol.inner_radius;
  const Eigen::VectorXcd outer = fourier_coefficients<double>(Eigen::VectorXcd(phi_samples(1.0).array().exp()));
  const Eigen::VectorXcd inner = fourier_coefficients<double>(Eigen::VectorXcd(phi_samples(r).array().exp()));
  const long half = L / 2;
  Eigen::VectorXcd e(2 * half - 1);  // exponents -(half-1)..(half-1)
  for (long n = -(half - 1); n < half; ++n)
    e[n + half - 1] = n >= 0 ? outer[n] : inner[mode_slot(n, L)] * std::pow(r, static_cast<double>(-n));
  LaurentSeries series(-(static_cast<int>(half) - 1), e);
  series = series * LaurentSeries::monomial(sol.monomial_order);
  if (sol.annulus_zero) {
    Eigen::VectorXcd lin(2);
    lin << -*sol.annulus_zero, 1.0;
    series = series * LaurentSeries(0, lin);
  }
  // Trim on the size each term reaches on the closed annulus, r^n |c_n| for n < 0.
  const Eigen::VectorXcd& c = series.coeffs();
  Eigen::VectorXd size(c.size());
  for (long i = 0; i < c.size(); ++i) {
    const int n = series.lowest() + static_cast<int>(i);
    size[i] = std::abs(c[i]) * (n < 0 ? std::pow(r, n) : 1.0);
  }
  const double tol = 1e-16 * size.maxCoeff();
  long first = 0, last = c.size() - 1;
  while (first < last && size[first] <= tol) ++first;
  while (last > first && size[last] <= tol) --last;
  return LaurentSeries(series.lowest() + static_cast<int>(first), c.segment(first, last - first + 1));
}

RHSolution solve_rh(const CurveFamily& cfam, const Divisor& div, const RHOptions& opts) {
  const char* stage = "rh_solver.solve";
  if (cfam.components.size() != 1)
    throw Error(ErrorKind::Argument, stage, "disc solver needs exactly one curve component");
  const int K = cfam.K;
  if (!is_power_of_two(K) || K < 8) throw Error(ErrorKind::Argument, stage, "grid size must be a power of two");
  SurfaceSpec surface;
  surface.K = K;
  div.validate(surface);
  const int w = div.total_degree();

  const BlaschkeBoundary blaschke = blaschke_boundary(div, K);
  const Eigen::VectorXd s = periodic_grid<double>(K);
  Eigen::VectorXd theta0 = static_cast<double>(w) * s;
  if (opts.initial_offset) {
    if (opts.initial_offset->size() != K) throw Error(ErrorKind::Argument, stage, "initial offset size mismatch");
    theta0 += *opts.initial_offset;
    theta0.array() -= opts.initial_offset->mean();
  }

  // Circulant matrix of the conjugation operator, used by Newton steps.
  Eigen::MatrixXd Hmat;
  auto conjugation_matrix = [&]() -> const Eigen::MatrixXd& {
    if (Hmat.size() == 0) {
      Eigen::VectorXd e0 = Eigen::VectorXd::Zero(K);
      e0[0] = 1.0;
      const Eigen::VectorXd col = harmonic_conjugate<double>(e0);
      Hmat.resize(K, K);
      for (int j = 0; j < K; ++j)
        for (int i = 0; i < K; ++i) Hmat(i, j) = col[(i - j + K) % K];
    }
    return Hmat;
  };

  auto defect_of = [&](const Eigen::VectorXd& theta, Eigen::VectorXd* ell_out) {
    const Eigen::VectorXd ell = log_radii(cfam, 0, theta);
    const Eigen::VectorXd psi = theta - blaschke.arg;
    Eigen::VectorXd d = psi - harmonic_conjugate<double>(ell);
    d.array() -= psi.mean();
    if (ell_out) *ell_out = ell;
    return d;
  };

  std::vector<RHTraceRow> rows;
  auto record = [&](RHTraceRow row) {
    rows.push_back(row);
    if (opts.trace) opts.trace->push_back(row);
  };

  double lambda0 = opts.lambda0;
  Eigen::VectorXd theta;
  int iterations = 0;
  bool converged = false;
  for (;;) {
    theta = theta0;
    double lambda = lambda0;
    bool reindexed = false;
    Eigen::VectorXd d = defect_of(theta, nullptr);
    double defect = sup_abs(d);
    for (int it = 0;; ++it) {
      if (defect < opts.tol) {
        converged = true;
        iterations = it;
        break;
      }
      if (it >= opts.max_iter) {
        iterations = it;
        break;
      }
      Eigen::VectorXd trial;
      double trial_defect = std::numeric_limits<double>::infinity();
      Eigen::VectorXd trial_d;
      std::string step = "picard";
      if (defect < opts.newton_switch) {
        const Eigen::VectorXd slope = log_radii_dtheta(cfam, 0, theta);
        const Eigen::MatrixXd J =
            Eigen::MatrixXd::Identity(K, K) - conjugation_matrix() * slope.asDiagonal();
        const Eigen::VectorXd delta = J.partialPivLu().solve(d);
        trial = theta - delta;
        trial_d = defect_of(trial, nullptr);
        trial_defect = sup_abs(trial_d);
        if (trial_defect < defect) step = "newton";
      }
      if (step == "picard") {
        for (;;) {
          trial = theta - lambda * d;
          trial_d = defect_of(trial, nullptr);
          trial_defect = sup_abs(trial_d);
          if (trial_defect <= defect || lambda <= opts.lambda_floor) break;
          lambda = std::max(0.5 * lambda, opts.lambda_floor);
        }
      }
      if (!angle_indexing_ok(trial, w)) {
        reindexed = true;
        break;
      }
      theta = std::move(trial);
      d = std::move(trial_d);
      defect = trial_defect;
      record({static_cast<int>(rows.size()) + 1, defect, step == "newton" ? 1.0 : lambda, step});
    }
    if (!reindexed) break;
    lambda0 *= 0.5;
    if (lambda0 < opts.lambda_floor) {
      std::ostringstream os;
      os << "winding of the boundary angle left the class w = " << w << " at every damping level; "
         << defect_history(rows);
      throw Error(ErrorKind::Reindexing, stage, os.str());
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "no convergence within " << opts.max_iter << " iterations (tol " << opts.tol << "); "
       << defect_history(rows);
    throw Error(ErrorKind::Nonconvergence, stage, os.str());
  }

  RHSolution sol;
  sol.kind = SurfaceKind::Disc;
  sol.K = K;
  sol.divisor = div;
  sol.theta = {theta};
  sol.iterations = iterations;
  sol.trace = rows;

  Eigen::VectorXd ell;
  sol.defect = sup_abs(defect_of(theta, &ell));
  const double psi_mean = (theta - blaschke.arg).mean();
  const Eigen::VectorXcd uhat = fourier_coefficients<double>(ell);
  Eigen::VectorXcd phi(K / 2);
  phi[0] = Complex(uhat[0].real(), psi_mean);
  for (int m = 1; m < K / 2; ++m) phi[m] = 2.0 * uhat[m];
  sol.zerofree_log = LaurentSeries(0, phi);
  sol.coeffs = zeta_coefficients(sol);

  const Eigen::VectorXcd trace = boundary_trace(sol, 1.0, K);
  sol.residual = radial_mismatch(cfam, 0, trace);
  sol.winding_defect = discrete_winding(trace) - w;

  Eigen::VectorXcd quotient(K);
  for (int k = 0; k < K; ++k) quotient[k] = std::exp(ell[k]) * std::polar(1.0, theta[k]) / blaschke.values[k];
  const Eigen::VectorXcd qc = fourier_coefficients<double>(quotient);
  for (int idx = K / 2 + 1; idx < K; ++idx) sol.holomorphy_defect = std::max(sol.holomorphy_defect, std::abs(qc[idx]));
  return sol;
}

RHSolution solve_rh_annulus(const CurveFamily& cfam, double r, const RHOptions& opts) {
  const char* stage = "rh_solver.annulus";
  if (cfam.components.size() != 2)
    throw Error(ErrorKind::Argument, stage, "annulus solver needs curve families on both boundary circles");
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::Argument, stage, "inner radius must lie in (0, 1)");
  const int K = cfam.K;
  const double logr = std::log(r);
  const Eigen::VectorXd s = periodic_grid<double>(K);

  // Index q = (mean log R_in - mean log R_out) / log r fixes x^m and the zero t.
  auto index_of = [&](const Eigen::VectorXd& lo, const Eigen::VectorXd& li) { return (li.mean() - lo.mean()) / logr; };
  const double q0 = index_of(cfam.components[0].radii.array().log().rowwise().mean(),
                             cfam.components[1].radii.array().log().rowwise().mean());
  const bool integral = std::abs(q0 - std::round(q0)) <= 1e-9;
  const int m = integral ? static_cast<int>(std::lround(q0)) : static_cast<int>(std::floor(q0));
  const int z = integral ? 0 : 1;
  const int w = m + z;

  struct Update {
    Eigen::VectorXd theta_o, theta_i;
    LaurentSeries phi;
    std::optional<double> t;
    double period = 0.0;
  };

  // One application of the fixed-point map: solve the linear modulus problem for the current angles.
  auto apply = [&](const Eigen::VectorXd& th_o, const Eigen::VectorXd& th_i) {
    Update up;
    const Eigen::VectorXd lo = log_radii(cfam, 0, th_o);
    const Eigen::VectorXd li = log_radii(cfam, 1, th_i);
    const double q = index_of(lo, li);
    if (z) {
      const double logt = (q - m) * logr;
      up.t = std::exp(logt);
      if (!(*up.t > r && *up.t < 1.0)) {
        std::ostringstream os;
        os << "annulus zero t = " << *up.t << " left (r, 1)";
        throw Error(ErrorKind::Nonconvergence, stage, os.str());
      }
    }
    Eigen::VectorXd uo = lo, ui = li.array() - m * logr;
    if (up.t) {
      for (int k = 0; k < K; ++k) {
        uo[k] -= std::log(std::abs(std::polar(1.0, s[k]) - *up.t));
        ui[k] -= std::log(std::abs(std::polar(r, s[k]) - *up.t));
      }
    }
    up.period = (ui.mean() - uo.mean()) / logr;
    const Eigen::VectorXcd co = fourier_coefficients<double>(uo);
    const Eigen::VectorXcd ci = fourier_coefficients<double>(ui);
    const int half = K / 2;
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * half - 1);  // exponents -(half-1)..(half-1)
    c[half - 1] = co[0].real();
    for (int n = 1; n < half; ++n) {
      const double rn = std::pow(r, n);
      const Complex Y = 2.0 * (ci[n] - co[n] * rn) / (1.0 / rn - rn);
      c[half - 1 + n] = 2.0 * co[n] - Y;
      c[half - 1 - n] = std::conj(Y);
    }
    up.phi = LaurentSeries(-(half - 1), c);
    up.theta_o.resize(K);
    up.theta_i.resize(K);
    for (int k = 0; k < K; ++k) {
      const Complex xo = std::polar(1.0, s[k]);
      const Complex xi = std::polar(r, s[k]);
      double ao = m * s[k] + up.phi.eval(xo).imag();
      double ai = m * s[k] + up.phi.eval(xi).imag();
      if (up.t) {
        ao += s[k] + std::arg(1.0 - *up.t / xo);
        ai += kPi + std::arg(*up.t - xi);
      }
      up.theta_o[k] = ao;
      up.theta_i[k] = ai;
    }
    // Gauge: mean(theta_out - w s) = 0.
    const double shift = -(up.theta_o - static_cast<double>(w) * s).mean();
    up.theta_o.array() += shift;
    up.theta_i.array() += shift;
    up.phi.coeffs()[half - 1] += Complex(0.0, shift);
    return up;
  };

  std::vector<RHTraceRow> rows;
  Eigen::VectorXd th_o = static_cast<double>(w) * s;
  Eigen::VectorXd th_i = static_cast<double>(m) * s;
  double lambda = opts.lambda0;
  Update up = apply(th_o, th_i);
  auto defect_of = [&](const Update& u) {
    return std::max(sup_abs(th_o - u.theta_o), sup_abs(th_i - u.theta_i));
  };
  double defect = defect_of(up);
  int it = 0;
  for (; defect >= opts.tol; ++it) {
    if (it >= opts.max_iter) {
      std::ostringstream os;
      os << "annulus iteration did not converge within " << opts.max_iter << " iterations; " << defect_history(rows);
      throw Error(ErrorKind::Nonconvergence, stage, os.str());
    }
    const Eigen::VectorXd old_o = th_o, old_i = th_i;
    for (;;) {
      th_o = old_o - lambda * (old_o - up.theta_o);
      th_i = old_i - lambda * (old_i - up.theta_i);
      Update next = apply(th_o, th_i);
      const double nd = defect_of(next);
      if (nd <= defect || lambda <= opts.lambda_floor) {
        up = std::move(next);
        defect = nd;
        break;
      }
      lambda = std::max(0.5 * lambda, opts.lambda_floor);
    }
    if (!angle_indexing_ok(th_o, w) || !angle_indexing_ok(th_i, m))
      throw Error(ErrorKind::Reindexing, stage, "boundary angle left its winding class; " + defect_history(rows));
    RHTraceRow row{static_cast<int>(rows.size()) + 1, defect, lambda, "picard"};
    rows.push_back(row);
    if (opts.trace) opts.trace->push_back(row);
  }

  RHSolution sol;
  sol.kind = SurfaceKind::Annulus;
  sol.K = K;
  sol.inner_radius = r;
  sol.monomial_order = m;
  sol.annulus_zero = up.t;
  sol.zerofree_log = up.phi;
  sol.theta = {up.theta_o, up.theta_i};
  sol.defect = defect;
  sol.iterations = it;
  sol.trace = rows;
  sol.period_residual = std::abs(up.period);
  sol.coeffs = zeta_coefficients(sol);
  const Eigen::VectorXcd outer = boundary_trace(sol, 1.0, K);
  const Eigen::VectorXcd inner = boundary_trace(sol, r, K);
  sol.residual = std::max(radial_mismatch(cfam, 0, outer), radial_mismatch(cfam, 1, inner));
  sol.winding_defect = discrete_winding(outer) - w;
  return sol;
}

double sup_on_disc(const RHSolution& sol, double radius, int radial, int angular) {
  double worst = 0.0;
  for (int i = 0; i <= radial; ++i)
    for (int a = 0; a < angular; ++a) {
      const Complex x = std::polar(radius * i / radial, 2.0 * kPi * a / angular);
      worst = std::max(worst, std::abs(sol.eval(x)));
    }
  return worst;
}

int predicted_zero_order(double max_radius, double compact_radius, double eps) {
  if (eps >= max_radius) return 0;
  if (compact_radius <= 0.0) return 1;
  return static_cast<int>(std::ceil(std::log(eps) / std::log(compact_radius)));
}

SmallnessResult smallness_by_zeros_solved(const CurveFamily& cfam, const Divisor& base, double compact_radius,
                                          double eps, const RHOptions& opts) {
  const char* stage = "rh_solver.smallness";
  if (!(eps > 0.0)) throw Error(ErrorKind::Argument, stage, "eps must be positive");
  if (!(compact_radius >= 0.0 && compact_radius < 1.0))
    throw Error(ErrorKind::Argument, stage, "compact radius must lie in [0, 1)");
  SmallnessResult out;
  out.predicted_order = predicted_zero_order(cfam.max_radius(), compact_radius, eps);
  if (out.predicted_order == 0) {
    out.divisor = base;
    out.solution = solve_rh(cfam, base, opts);
    out.history.emplace_back(base.order_at(0.0), sup_on_disc(out.solution, compact_radius));
    return out;
  }
  int order = std::max(base.order_at(0.0), out.predicted_order);
  for (int tries = 0; tries < 64; ++tries, ++order) {
    Divisor div = base.with_min_order(0.0, order);
    RHSolution sol = solve_rh(cfam, div, opts);
    const double sup = sup_on_disc(sol, compact_radius);
    out.history.emplace_back(order, sup);
    if (sup < eps) {
      out.divisor = std::move(div);
      out.solution = std::move(sol);
      return out;
    }
  }
  throw Error(ErrorKind::Nonconvergence, stage, "no zero order up to 64 beyond the prediction met eps");
}

nlohmann::json rh_factorization_to_json(const RHSolution& sol) {
  nlohmann::json j;
  j["kind"] = sol.kind == SurfaceKind::Disc ? "disc" : "annulus";
  j["K"] = sol.K;
  j["inner_radius"] = sol.inner_radius;
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : sol.divisor.points)
    pts.push_back({{"re", p.location.real()}, {"im", p.location.imag()}, {"order", p.order}});
  j["blaschke"] = pts;
  j["monomial_order"] = sol.monomial_order;
  j["annulus_zero"] = sol.annulus_zero ? nlohmann::json(*sol.annulus_zero) : nlohmann::json(nullptr);
  std::vector<double> re, im;
  for (long i = 0; i < sol.zerofree_log.coeffs().size(); ++i) {
    re.push_back(sol.zerofree_log.coeffs()[i].real());
    im.push_back(sol.zerofree_log.coeffs()[i].imag());
  }
  j["log_coeffs"] = {{"lowest", sol.zerofree_log.lowest()}, {"re", re}, {"im", im}};
  return j;
}

RHSolution rh_factorization_from_json(const nlohmann::json& j) {
  const char* stage = "rh_solver.load";
  try {
    RHSolution sol;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "disc" && kind != "annulus") throw Error(ErrorKind::Schema, stage, "zeta.kind must be disc or annulus");
    sol.kind = kind == "disc" ? SurfaceKind::Disc : SurfaceKind::Annulus;
    sol.K = j.at("K").get<int>();
    if (!is_power_of_two(sol.K)) throw Error(ErrorKind::Schema, stage, "zeta.K must be a power of two");
    sol.inner_radius = j.at("inner_radius").get<double>();
    for (const auto& p : j.at("blaschke"))
      sol.divisor.points.push_back({Complex(p.at("re").get<double>(), p.at("im").get<double>()), p.at("order").get<int>()});
    sol.monomial_order = j.at("monomial_order").get<int>();
    if (!j.at("annulus_zero").is_null()) sol.annulus_zero = j.at("annulus_zero").get<double>();
    const auto& lc = j.at("log_coeffs");
    const auto re = lc.at("re").get<std::vector<double>>();
    const auto im = lc.at("im").get<std::vector<double>>();
    if (re.size() != im.size() || re.empty()) throw Error(ErrorKind::Schema, stage, "zeta.log_coeffs malformed");
    Eigen::VectorXcd c(static_cast<long>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) c[static_cast<long>(i)] = Complex(re[i], im[i]);
    sol.zerofree_log = LaurentSeries(lc.at("lowest").get<int>(), c);
    sol.coeffs = zeta_coefficients(sol);
    return sol;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Schema, stage, std::string("zeta factorization: ") + e.what());
  }
}

}  // namespace holopush
