#include "holopush/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "holopush/error.hpp"
#include "holopush/fourier.hpp"
#include "holopush/parallel.hpp"

namespace holopush {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;
constexpr int kPolarRadial = 64;
constexpr int kPolarAngular = 64;
constexpr double kMaxPrincipleSlack = 1e-10;
constexpr double kJetTolerance = 1e-6;

double theta_at(int k, int K) { return 2.0 * kPi * k / K; }

// Interior nodes of the closed surface: r_i = i / 64 on the disc, i = 0..63
// (linear in [r, 1) on the annulus), 64 angles each; boundary circles excluded.
std::vector<Complex> interior_grid(const SurfaceSpec& surface) {
  std::vector<Complex> out;
  const double r0 = surface.kind == SurfaceKind::Disc ? 0.0 : surface.inner_radius;
  for (int i = 0; i < kPolarRadial; ++i) {
    const double r = r0 + (1.0 - r0) * i / kPolarRadial;
    if (surface.kind == SurfaceKind::Annulus && i == 0) continue;
    if (r == 0.0) {
      out.emplace_back(0.0);
      continue;
    }
    for (int a = 0; a < kPolarAngular; ++a) out.push_back(std::polar(r, theta_at(a, kPolarAngular)));
  }
  return out;
}

std::vector<Complex> boundary_grid(const SurfaceSpec& surface) {
  std::vector<Complex> out;
  for (int c = 0; c < surface.components(); ++c)
    for (int k = 0; k < surface.K; ++k) out.push_back(surface.boundary_point(c, k));
  return out;
}

// Closed-surface grid used for immersion and injectivity: 8 rings of 192 nodes plus the center.
std::vector<Complex> audit_grid(const SurfaceSpec& surface) {
  std::vector<Complex> out;
  constexpr int rings = 8, per_ring = 192;
  if (surface.kind == SurfaceKind::Disc) out.emplace_back(0.0);
  const double r0 = surface.kind == SurfaceKind::Disc ? 0.0 : surface.inner_radius;
  for (int i = surface.kind == SurfaceKind::Disc ? 1 : 0; i <= rings; ++i) {
    const double r = r0 + (1.0 - r0) * i / rings;
    for (int a = 0; a < per_ring; ++a) out.push_back(std::polar(r, theta_at(a, per_ring)));
  }
  return out;
}

template <typename F>
std::vector<double> map_grid(const std::vector<Complex>& pts, F&& f) {
  std::vector<double> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { out[i] = f(pts[i]); });
  return out;
}

double max_of(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return m;
}

double min_of(const std::vector<double>& v) {
  double m = std::numeric_limits<double>::infinity();
  for (double x : v) m = std::min(m, x);
  return m;
}

// Points of {|x| <= radius}: 17 radii, 64 angles.
std::vector<Complex> compact_grid(double radius) {
  std::vector<Complex> out{Complex(0.0)};
  if (radius <= 0.0) return out;
  for (int i = 1; i <= 16; ++i)
    for (int a = 0; a < kPolarAngular; ++a) out.push_back(std::polar(radius * i / 16.0, theta_at(a, kPolarAngular)));
  return out;
}

double approximation_error(const LaurentMap& f, const LaurentMap& f1, double radius) {
  const auto pts = compact_grid(radius);
  return max_of(map_grid(pts, [&](Complex x) { return (f.eval(x) - f1.eval(x)).norm(); }));
}

// Dist from a to the boundary of the surface.
double boundary_distance(const SurfaceSpec& s, Complex a) {
  const double r = std::abs(a);
  return s.kind == SurfaceKind::Disc ? 1.0 - r : std::min(1.0 - r, r - s.inner_radius);
}

// Taylor coefficients of g around a from m samples on a small circle.
std::vector<Eigen::VectorXcd> local_taylor(const std::function<Eigen::VectorXcd(Complex)>& g, Complex a, double radius,
                                           int n) {
  constexpr int m = 32;
  Eigen::MatrixXcd samples(n, m);
  for (int k = 0; k < m; ++k) samples.col(k) = g(a + std::polar(radius, theta_at(k, m)));
  std::vector<Eigen::VectorXcd> coeffs(m, Eigen::VectorXcd::Zero(n));
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXcd c = cauchy_coeffs(Eigen::VectorXcd(samples.row(i).transpose()));
    for (int k = 0; k < m; ++k) coeffs[k][i] = c[k] / std::pow(radius, k);
  }
  return coeffs;
}

// Drops outer coefficients whose size on the surface, |c_p| max(1, r^p), is below tol.
LaurentSeries trim_on_surface(const LaurentSeries& s, double r, double tol) {
  auto size = [&](int p) { return std::abs(s[p]) * (p < 0 ? std::pow(r, p) : 1.0); };
  int lo = s.lowest(), hi = s.highest();
  while (lo <= hi && size(lo) <= tol) ++lo;
  while (hi >= lo && size(hi) <= tol) --hi;
  if (lo > hi) return LaurentSeries(0, Eigen::VectorXcd::Zero(1));
  return LaurentSeries(lo, s.coeffs().segment(lo - s.lowest(), hi - lo + 1));
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

void set_clause(ProperMapReport& rep, const std::string& name, ClauseStatus st, const std::string& field,
                const std::string& detail = {}) {
  rep.clauses.push_back({name, st, field, detail});
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::string_view to_string(ClauseStatus s) {
  switch (s) {
    case ClauseStatus::Pass: return "pass";
    case ClauseStatus::Fail: return "fail";
    case ClauseStatus::NotClaimed: return "not_claimed";
    case ClauseStatus::NotEvaluated: return "not_evaluated";
  }
  return "unknown";
}

Eigen::VectorXcd MapData::eval_factors(Complex x) const { return eval_H(cf, x, zeta.eval(x)); }

LaurentMap compose(const CenterFamily& cf, const LaurentSeries& zeta) {
  const double r = cf.surface.kind == SurfaceKind::Annulus ? cf.surface.inner_radius : 1.0;
  LaurentMap f = cf.f1;
  LaurentSeries power = LaurentSeries::monomial(0, 1.0);
  for (int j = 1; j <= cf.N(); ++j) {
    power = trim_on_surface(power * zeta, r, 1e-18);
    f = f + cf.surrogate[j - 1] * power;
  }
  return f.trimmed(0.0);
}

MapData make_map(CenterFamily cf, RHSolution zeta) {
  MapData m;
  m.surface = cf.surface;
  m.cf = std::move(cf);
  m.zeta = std::move(zeta);
  if (m.zeta.coeffs.empty()) m.zeta.coeffs = zeta_coefficients(m.zeta);
  m.f = compose(m.cf, m.zeta.coeffs);
  return m;
}

json map_to_json(const MapData& map) {
  json j;
  j["dimension"] = map.cf.dimension();
  j["surface"] = {{"kind", map.surface.kind == SurfaceKind::Disc ? "disc" : "annulus"},
                  {"K", map.surface.K},
                  {"inner_radius", map.surface.inner_radius}};
  j["H"] = surrogate_to_json(map.cf);
  j["zeta"] = rh_factorization_to_json(map.zeta);
  return j;
}

MapData map_from_json(const json& dump) {
  const char* stage = "pipeline.load";
  if (!dump.is_object() || dump.empty()) throw Error(ErrorKind::Schema, stage, "map dump is empty");
  for (const char* key : {"dimension", "surface", "H", "zeta"})
    if (!dump.contains(key)) throw Error(ErrorKind::Schema, stage, std::string("map dump lacks '") + key + "'");
  try {
    SurfaceSpec surface;
    const json& s = dump.at("surface");
    const std::string kind = s.at("kind").get<std::string>();
    if (kind != "disc" && kind != "annulus") throw Error(ErrorKind::Schema, stage, "surface.kind must be disc or annulus");
    surface.kind = kind == "disc" ? SurfaceKind::Disc : SurfaceKind::Annulus;
    surface.K = s.at("K").get<int>();
    surface.inner_radius = s.at("inner_radius").get<double>();
    const int n = dump.at("dimension").get<int>();
    if (n < 2) throw Error(ErrorKind::Schema, stage, "dimension must be at least 2");
    CenterFamily cf = surrogate_from_json(dump.at("H"), n, surface);
    RHSolution zeta = rh_factorization_from_json(dump.at("zeta"));
    zeta.coeffs = zeta_coefficients(zeta);
    return make_map(std::move(cf), std::move(zeta));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, stage, std::string("malformed map dump: ") + e.what());
  }
}

bool ProperMapReport::all_pass() const {
  if (error) return false;
  for (const auto& c : clauses)
    if (c.status == ClauseStatus::Fail || c.status == ClauseStatus::NotEvaluated) return false;
  return !clauses.empty();
}

json ProperMapReport::to_json() const {
  json j;
  j["status"] = error ? "error" : (all_pass() ? "pass" : "fail");
  if (error)
    j["error"] = {{"kind", std::string(holopush::to_string(error->kind()))},
                  {"stage", error->stage()},
                  {"message", error->what()}};
  else
    j["error"] = nullptr;
  json clause_json = json::object();
  for (const auto& c : clauses)
    clause_json[c.name] = {{"status", std::string(holopush::to_string(c.status))}, {"field", c.field}, {"detail", c.detail}};
  j["clauses"] = clause_json;
  if (!error) {
    json jets = json::array();
    for (const auto& e : jet_errors) jets.push_back({{"point", complex_json(e.point)}, {"order", e.order}, {"error", e.error}});
    j["metrics"] = {{"boundary_residual", boundary_residual},
                    {"interior_negativity", interior_negativity},
                    {"approx_error", approx_error},
                    {"jet_errors", jets},
                    {"hopf_margin", hopf_margin},
                    {"hopf_floor", hopf_floor},
                    {"immersion_margin", immersion_margin},
                    {"injectivity_audit", injectivity_audit},
                    {"composition_defect", composition_defect},
                    {"maximum_principle",
                     {{"zeta_interior", max_zeta_interior},
                      {"zeta_boundary", max_zeta_boundary},
                      {"rho_interior", max_rho_interior},
                      {"rho_boundary", max_rho_boundary}}}};
  } else {
    j["metrics"] = nullptr;
  }
  j["recommendations"] = recommendations;
  j["warnings"] = warnings;
  j["run"] = run_info;
  return j;
}

ImmersionAudit immersion_audit(const MapData& map, const RunConfig& cfg) {
  ImmersionAudit out;
  const auto pts = audit_grid(map.surface);
  out.grid_points = static_cast<int>(pts.size());
  out.separation = 4.0 * kPi / map.surface.K;
  out.immersion_margin = min_of(map_grid(pts, [&](Complex x) { return map.derivative(x).norm(); }));

  std::vector<Eigen::VectorXcd> images(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { images[i] = map.eval(pts[i]); });
  std::vector<double> row_min(pts.size(), std::numeric_limits<double>::infinity());
  parallel_for(pts.size(), [&](std::size_t i) {
    for (std::size_t k = i + 1; k < pts.size(); ++k)
      if (std::abs(pts[i] - pts[k]) > out.separation)
        row_min[i] = std::min(row_min[i], (images[i] - images[k]).norm());
  });
  out.injectivity_audit = min_of(row_min);

  const int n = map.cf.dimension();
  const bool immersion_claimed = n >= 3, embedding_claimed = n >= 4;
  if ((immersion_claimed && out.immersion_margin <= 0.0) || (embedding_claimed && out.injectivity_audit <= 0.0)) {
    std::ostringstream os;
    os << "non-positive margin: perturb h before fitting and rerun, e.g. --set pert_h="
       << std::max(cfg.pert_h * 2.0, 1e-3) << " --set seed=" << cfg.seed + 1;
    out.recommendations.push_back(os.str());
  }
  return out;
}

ProperMapReport verify_map(const MapData& map, const RunConfig& cfg, const DefiningFunction& df) {
  ProperMapReport rep;
  const SurfaceSpec& surface = map.surface;
  const int n = map.cf.dimension();
  auto rho_safe = [&](const Eigen::VectorXcd& z) {
    return df.in_box(z) ? df.rho(z) : std::numeric_limits<double>::infinity();
  };

  // Boundary: residual, Hopf margin, boundary maxima.
  const auto bpts = boundary_grid(surface);
  const auto brho = map_grid(bpts, [&](Complex x) { return rho_safe(map.eval(x)); });
  rep.boundary_residual = 0.0;
  for (double r : brho) rep.boundary_residual = std::max(rep.boundary_residual, std::abs(r));
  rep.max_rho_boundary = max_of(brho);
  rep.max_zeta_boundary = max_of(map_grid(bpts, [&](Complex x) { return std::abs(map.zeta.eval(x)); }));
  const auto hopf = map_grid(bpts, [&](Complex x) {
    const Eigen::VectorXcd z = map.eval(x);
    if (!df.in_box(z)) return -std::numeric_limits<double>::infinity();
    const Eigen::VectorXcd radial = map.derivative(x) * x;  // d/dr f(r e^{is}) * r
    const double d = 2.0 * (df.grad(z).cwiseProduct(radial).sum()).real();
    const bool inner = surface.kind == SurfaceKind::Annulus && std::abs(x) < 0.999;
    return inner ? -d / std::abs(x) : d;
  });
  rep.hopf_margin = min_of(hopf);
  rep.hopf_floor = cfg.hopf_floor * (cfg.band ? cfg.band->lambda_min : 1.0);

  // Interior: negativity, maximum principle, composition.
  const auto ipts = interior_grid(surface);
  const auto irho = map_grid(ipts, [&](Complex x) { return rho_safe(map.eval(x)); });
  rep.interior_negativity = max_of(irho);
  rep.max_rho_interior = rep.interior_negativity;
  rep.max_zeta_interior = max_of(map_grid(ipts, [&](Complex x) { return std::abs(map.zeta.eval(x)); }));
  {
    std::vector<Complex> all = ipts;
    all.insert(all.end(), bpts.begin(), bpts.end());
    rep.composition_defect = max_of(map_grid(all, [&](Complex x) { return (map.eval(x) - map.eval_factors(x)).norm(); }));
  }

  // Compact set and interpolation.
  const bool disc = surface.kind == SurfaceKind::Disc;
  rep.approx_error = disc ? approximation_error(map.f, cfg.f1, cfg.compact_K) : 0.0;
  for (const auto& ip : cfg.interp) {
    const double radius = std::min(0.05, boundary_distance(surface, ip.point) / 2.0);
    JetError je{ip.point, ip.order, 0.0};
    const auto cf_f = local_taylor([&](Complex x) { return map.eval(x); }, ip.point, radius, n);
    const auto cf_1 = local_taylor([&](Complex x) { return cfg.f1.eval(x); }, ip.point, radius, n);
    double factorial = 1.0;
    for (int k = 0; k <= ip.order; ++k) {
      if (k > 0) factorial *= k;
      const Eigen::VectorXcd target = ip.jet.empty() ? Eigen::VectorXcd(factorial * cf_1[k]) : ip.jet[k];
      je.error = std::max(je.error, (factorial * cf_f[k] - target).norm());
    }
    rep.jet_errors.push_back(je);
  }

  const ImmersionAudit audit = immersion_audit(map, cfg);
  rep.immersion_margin = audit.immersion_margin;
  rep.injectivity_audit = audit.injectivity_audit;
  rep.recommendations = audit.recommendations;

  // Clauses.
  const bool proper = rep.boundary_residual <= cfg.tol_boundary && rep.interior_negativity < 0.0;
  set_clause(rep, "proper", proper ? ClauseStatus::Pass : ClauseStatus::Fail, "boundary_residual",
             "boundary_residual <= " + format_double(cfg.tol_boundary) + " and interior_negativity < 0");
  if (disc)
    set_clause(rep, "approximation", rep.approx_error < cfg.eps ? ClauseStatus::Pass : ClauseStatus::Fail, "approx_error",
               "sup over |x| <= " + format_double(cfg.compact_K) + " of |f - f1| < " + format_double(cfg.eps));
  else
    set_clause(rep, "approximation", ClauseStatus::NotClaimed, "approx_error", "not claimed on the annulus");
  if (cfg.interp.empty()) {
    set_clause(rep, "interpolation", ClauseStatus::NotClaimed, "jet_errors", "no interpolation points");
  } else {
    bool ok = true;
    for (const auto& e : rep.jet_errors) ok = ok && e.error <= kJetTolerance;
    set_clause(rep, "interpolation", ok ? ClauseStatus::Pass : ClauseStatus::Fail, "jet_errors",
               "every jet error <= " + format_double(kJetTolerance));
  }
  set_clause(rep, "hopf_boundary_immersion", rep.hopf_margin >= rep.hopf_floor ? ClauseStatus::Pass : ClauseStatus::Fail,
             "hopf_margin", "outward derivative of rho o f >= hopf_floor");
  if (n >= 3)
    set_clause(rep, "immersion", rep.immersion_margin > 0.0 ? ClauseStatus::Pass : ClauseStatus::Fail,
               "immersion_margin", "min |f'| over the closed surface > 0");
  else
    set_clause(rep, "immersion", ClauseStatus::NotClaimed, "immersion_margin", "claimed only for n >= 3");
  if (n >= 4)
    set_clause(rep, "embedding", rep.injectivity_audit > 0.0 ? ClauseStatus::Pass : ClauseStatus::Fail,
               "injectivity_audit", "separated grid pairs have distinct images");
  else
    set_clause(rep, "embedding", ClauseStatus::NotClaimed, "injectivity_audit", "claimed only for n >= 4");
  const bool maxp = rep.max_zeta_interior <= rep.max_zeta_boundary + kMaxPrincipleSlack &&
                    rep.max_rho_interior <= rep.max_rho_boundary + kMaxPrincipleSlack;
  set_clause(rep, "maximum_principle", maxp ? ClauseStatus::Pass : ClauseStatus::Fail, "maximum_principle",
             "interior maxima of |zeta| and rho o f do not exceed boundary maxima + 1e-10");

  if (n == 2 && rep.immersion_margin <= 0.0)
    rep.warnings.push_back("immersion margin is non-positive (not claimed for n = 2)");
  if (rep.composition_defect > 1e-12)
    rep.warnings.push_back("composed coefficients differ from H(x, zeta(x)) by " + format_double(rep.composition_defect));
  return rep;
}

PipelineResult run_pipeline(const RunConfig& input) {
  PipelineResult res;
  res.config = input;
  RunConfig& cfg = res.config;
  json info = json::object();
  std::vector<std::string> warnings;

  try {
    if (cfg.surface.kind == SurfaceKind::Annulus && !cfg.experimental_annulus)
      throw Error(ErrorKind::Configuration, "pipeline.config", "the annulus requires experimental.annulus = true");
    const auto df = cfg.domain.make();
    if (cfg.f1.dimension() != df->dimension())
      throw Error(ErrorKind::Configuration, "pipeline.config", "f1 dimension does not match the domain");
    materialize_defaults(cfg, *df);
    const CollarBand band = *cfg.band;

    // Collar gate.
    const auto f1b = f1_boundary_samples(cfg);
    for (std::size_t i = 0; i < f1b.size(); ++i) {
      const double r = df->in_box(f1b[i]) ? df->rho(f1b[i]) : std::numeric_limits<double>::infinity();
      if (!band.contains(r)) {
        std::ostringstream os;
        os << "f1 boundary sample " << i << " has rho = " << r << " outside the collar band [" << band.rho_lo << ", "
           << band.rho_hi << "]";
        throw Error(ErrorKind::CollarViolation, "pipeline.collar", os.str());
      }
    }
    const AdmissibilityReport adm = check_admissible(*df, band, f1b, cfg.admissibility);
    info["admissibility"] = {{"min_eigenvalue", adm.min_eigenvalue}, {"min_grad_norm", adm.min_grad_norm}};
    if (!adm.pass) throw Error(ErrorKind::Domain, "pipeline.admissibility", adm.message);

    // Frames and disc scale.
    const int K = cfg.surface.K;
    std::vector<BoundaryFrame> frames;
    std::vector<CxPoint> directions;
    for (int c = 0; c < cfg.surface.components(); ++c) {
      const std::vector<CxPoint> pts(f1b.begin() + c * K, f1b.begin() + (c + 1) * K);
      frames.push_back(smooth_frame(*df, pts, build_frame(*df, pts), K / 8));
      directions.insert(directions.end(), frames.back().vectors.begin(), frames.back().vectors.end());
    }
    const double c = choose_scale(*df, f1b, band, directions);
    info["disc_scale"] = c;

    // Center family and surrogate.
    CenterFamily cf = sample_h(*df, cfg.surface, frames, cfg.f1, c, cfg.J);
    const bool perturbed = cfg.domain.dimension >= 3 && cfg.pert_h > 0.0;
    if (perturbed) perturb_h(cf, cfg.pert_h, cfg.seed);
    info["perturbed"] = perturbed;
    cf.report_radius = cfg.report_radius;
    cf = fit_surrogate(cf, cfg.N, cfg.d_minus, cfg.d_plus);
    info["surrogate"] = {{"N", cf.N()}, {"d_minus", cf.d_minus}, {"d_plus", cf.d_plus}, {"fit_error", cf.fit_error},
                         {"condition", cf.condition}};
    if (!(cf.fit_error <= cfg.tol_fit)) {
      std::ostringstream os;
      os << "surrogate fit error " << cf.fit_error << " exceeds tolerances.fit " << cfg.tol_fit
         << "; h is not holomorphic in x, raise surrogate.d_minus (zeta then vanishes at 0 to that order)";
      throw Error(ErrorKind::Fit, "pipeline.fit", os.str());
    }
    if (cf.d_plus >= 2) {
      const CenterFamily half = fit_surrogate(cf, cfg.N, cfg.d_minus, cf.d_plus / 2);
      info["surrogate"]["fit_error_half_degree"] = half.fit_error;
      if (half.fit_error < cf.fit_error) warnings.push_back("surrogate fit error does not decrease with degree");
    }

    // Curves.
    res.curves = detect_curves(cf, *df, cfg.A);
    const CurveFamily& cfam = *res.curves;
    info["curves"] = {{"min_radius", cfam.min_radius()},
                      {"max_radius", cfam.max_radius()},
                      {"transversality_margin", cfam.transversality_margin},
                      {"starlike", cfam.starlike_cert},
                      {"smoothing_residual", cfam.smoothing_residual},
                      {"reentries", cfam.reentries}};
    warnings.insert(warnings.end(), cfam.warnings.begin(), cfam.warnings.end());

    RHOptions opts;
    opts.tol = cfg.tol_rh;
    opts.max_iter = cfg.rh_max_iter;
    opts.trace = &res.trace;

    if (cfg.surface.kind == SurfaceKind::Annulus) {
      RHSolution zeta = solve_rh_annulus(cfam, cfg.surface.inner_radius, opts);
      res.map = make_map(std::move(cf), std::move(zeta));
    } else {
      // Prescribed divisor: user zeros, interpolation jets, and poles of H at 0.
      Divisor base;
      for (const auto& z : cfg.zeros) base = base.with_min_order(z.point, base.order_at(z.point) + z.order);
      for (const auto& z : cfg.poles) base = base.with_min_order(z.point, base.order_at(z.point) + z.order);
      for (const auto& ip : cfg.interp) base = base.with_min_order(ip.point, ip.order + 1);
      if (cfg.d_minus > 0) base = base.with_min_order(0.0, cfg.d_minus);
      base = base.with_min_order(0.0, std::max(1, base.order_at(0.0)));
      base.validate(cfg.surface);

      info["predicted_zero_order"] = predicted_zero_order(cfam.max_radius(), cfg.compact_K, cfg.eps);

      // Raise the order at 0 until the measured approximation error passes eps.
      json sequence = json::array();
      std::optional<MapData> chosen;
      double previous = std::numeric_limits<double>::infinity();
      bool monotone = true;
      int order = base.order_at(0.0);
      for (int tries = 0; tries < 64 && !chosen; ++tries, ++order) {
        const Divisor div = base.with_min_order(0.0, order);
        RHSolution zeta = solve_rh(cfam, div, opts);
        MapData m = make_map(cf, std::move(zeta));
        const double err = approximation_error(m.f, cfg.f1, cfg.compact_K);
        sequence.push_back({{"order_at_0", order}, {"approx_error", err}});
        if (!(err < previous)) monotone = false;
        previous = err;
        if (err < cfg.eps) chosen = std::move(m);
      }
      info["approximation_sequence"] = sequence;
      info["approximation_monotone"] = monotone;
      if (!monotone) warnings.push_back("approximation error is not strictly decreasing in the zero order");
      if (!chosen)
        throw Error(ErrorKind::Nonconvergence, "pipeline.smallness", "no zero order within 64 steps reached eps");
      res.map = std::move(chosen);
    }

    const RHSolution& z = res.map->zeta;
    if (z.residual > cfg.tol_rh)
      warnings.push_back("zeta boundary trace is " + format_double(z.residual) + " from the curves, above tolerances.rh");
    json divisor = json::array();
    for (const auto& p : z.divisor.points) divisor.push_back({{"point", complex_json(p.location)}, {"order", p.order}});
    info["zeta"] = {{"winding", z.kind == SurfaceKind::Disc ? z.divisor.total_degree() : z.monomial_order},
                    {"divisor", divisor},
                    {"iterations", z.iterations},
                    {"defect", z.defect},
                    {"residual", z.residual},
                    {"holomorphy_defect", z.holomorphy_defect},
                    {"period_residual", z.period_residual},
                    {"winding_defect", z.winding_defect}};
    if (z.kind == SurfaceKind::Annulus) {
      info["zeta"]["annulus_zero"] = z.annulus_zero ? json(*z.annulus_zero) : json(nullptr);
      const double r = cfg.surface.inner_radius;
      if (z.annulus_zero && std::min(*z.annulus_zero - r, 1.0 - *z.annulus_zero) < 0.1 * (1.0 - r))
        warnings.push_back("annulus zero lies near a boundary circle; the K-point grid under-resolves log|x - t|");
    }

    res.report = verify_map(*res.map, cfg, *df);
  } catch (const Error& e) {
    res.report = ProperMapReport{};
    res.report.error = e;
    for (const char* name : {"proper", "approximation", "interpolation", "hopf_boundary_immersion", "immersion",
                             "embedding", "maximum_principle"})
      set_clause(res.report, name, ClauseStatus::NotEvaluated, "", "stage error");
  }
  res.report.warnings.insert(res.report.warnings.begin(), warnings.begin(), warnings.end());
  res.report.run_info = info;
  res.report.run_info["solver_iterations_total"] = static_cast<int>(res.trace.size());
  return res;
}

}  // namespace holopush
