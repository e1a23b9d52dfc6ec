#include "holopush/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "holopush/error.hpp"
#include "holopush/fourier.hpp"

namespace holopush {

namespace {

using nlohmann::json;

const char* kStage = "config";

[[noreturn]] void schema(const std::string& field, const std::string& msg) {
  throw Error(ErrorKind::Schema, kStage, field + ": " + msg);
}

template <typename T>
T get_or(const json& j, const char* key, const T& fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    schema(path + key, "has the wrong type");
  }
}

Complex read_complex(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  schema(field, "expected a number or [re, im]");
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

DomainSpec parse_domain(const json& j) {
  if (!j.is_object()) schema("domain", "must be an object");
  DomainSpec d;
  if (j.contains("poly")) {
    d.preset = "poly";
    d.dimension = get_or<int>(j, "dimension", 2, "domain.");
    d.box_radius = get_or<double>(j, "box_radius", 4.0, "domain.");
    if (!j.at("poly").is_array() || j.at("poly").empty()) schema("domain.poly", "must be a non-empty list");
    for (const auto& t : j.at("poly")) {
      if (!t.is_array() || t.size() != 2 || !t[0].is_array())
        schema("domain.poly", "entries must be [multi-index of length 2n, coefficient]");
      const auto idx = t[0].get<std::vector<int>>();
      if (static_cast<int>(idx.size()) != 2 * d.dimension) schema("domain.poly", "multi-index length must be 2n");
      if (std::any_of(idx.begin(), idx.end(), [](int p) { return p < 0; }))
        schema("domain.poly", "exponents must be non-negative");
      Monomial m;
      m.z_powers.assign(idx.begin(), idx.begin() + d.dimension);
      m.zbar_powers.assign(idx.begin() + d.dimension, idx.end());
      m.coefficient = read_complex(t[1], "domain.poly");
      d.terms.push_back(std::move(m));
    }
  } else {
    d.preset = get_or<std::string>(j, "preset", "ball", "domain.");
    if (d.preset == "ball") {
      d.dimension = get_or<int>(j, "dimension", 2, "domain.");
    } else if (d.preset == "ellipsoid") {
      d.radii = get_or<std::vector<double>>(j, "radii", {}, "domain.");
      d.dimension = static_cast<int>(d.radii.size());
      for (double r : d.radii)
        if (!(r > 0.0)) schema("domain.radii", "must be positive");
    } else {
      schema("domain.preset", "must be ball or ellipsoid (or give domain.poly)");
    }
    d.box_radius = get_or<double>(j, "box_radius", 0.0, "domain.");
  }
  if (d.dimension < 2) schema("domain.dimension", "must be at least 2");
  if (d.box_radius < 0.0) schema("domain.box_radius", "must be non-negative");
  return d;
}

json domain_json(const DomainSpec& d) {
  json j;
  if (d.preset == "poly") {
    j["dimension"] = d.dimension;
    j["box_radius"] = d.box_radius;
    json terms = json::array();
    for (const auto& m : d.terms) {
      std::vector<int> idx = m.z_powers;
      idx.insert(idx.end(), m.zbar_powers.begin(), m.zbar_powers.end());
      terms.push_back(json::array({idx, complex_json(m.coefficient)}));
    }
    j["poly"] = terms;
  } else {
    j["preset"] = d.preset;
    if (d.preset == "ball") j["dimension"] = d.dimension;
    if (d.preset == "ellipsoid") j["radii"] = d.radii;
    j["box_radius"] = d.box_radius;
  }
  return j;
}

LaurentMap parse_map(const json& j, int dimension, const std::string& field) {
  if (!j.is_array() || j.empty()) schema(field, "must be a non-empty list of {coordinate, exponent, re, im}");
  int lo = 0, hi = 0;
  bool first = true;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("coordinate") || !e.contains("exponent"))
      schema(field, "entries need coordinate and exponent");
    const int p = e.at("exponent").get<int>();
    lo = first ? p : std::min(lo, p);
    hi = first ? p : std::max(hi, p);
    first = false;
  }
  lo = std::min(lo, 0);
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(dimension, hi - lo + 1);
  for (const auto& e : j) {
    const int i = e.at("coordinate").get<int>();
    if (i < 0 || i >= dimension) schema(field, "coordinate out of range for the domain dimension");
    c(i, e.at("exponent").get<int>() - lo) += Complex(get_or<double>(e, "re", 0.0, field + "."),
                                                       get_or<double>(e, "im", 0.0, field + "."));
  }
  return LaurentMap(lo, c);
}

json map_json(const LaurentMap& m) {
  json out = json::array();
  for (int i = 0; i < m.dimension(); ++i)
    for (int p = m.lowest(); p <= m.highest(); ++p) {
      const Complex c = m.coefficient(i, p);
      if (c == Complex(0.0)) continue;
      out.push_back({{"coordinate", i}, {"exponent", p}, {"re", c.real()}, {"im", c.imag()}});
    }
  return out;
}

}  // namespace

std::unique_ptr<DefiningFunction> DomainSpec::make() const {
  if (preset == "ball")
    return std::make_unique<QuadraticDefiningFunction>(Eigen::VectorXd::Ones(dimension), box_radius);
  if (preset == "ellipsoid") {
    Eigen::VectorXd w(dimension);
    for (int j = 0; j < dimension; ++j) w[j] = 1.0 / (radii[j] * radii[j]);
    return std::make_unique<QuadraticDefiningFunction>(w, box_radius);
  }
  return std::make_unique<PolynomialDefiningFunction>(dimension, terms, box_radius > 0.0 ? box_radius : 4.0);
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) schema("config", "top level must be a JSON object");
  RunConfig cfg;
  try {
    const json surface = j.value("surface", json::object());
    const std::string kind = get_or<std::string>(surface, "kind", "disc", "surface.");
    if (kind != "disc" && kind != "annulus") schema("surface.kind", "must be disc or annulus");
    cfg.surface.kind = kind == "disc" ? SurfaceKind::Disc : SurfaceKind::Annulus;
    cfg.surface.K = get_or<int>(surface, "K", 256, "surface.");
    cfg.surface.inner_radius = get_or<double>(surface, "inner_radius", 0.5, "surface.");
    if (!is_power_of_two(cfg.surface.K) || cfg.surface.K < 64) schema("surface.K", "must be a power of two >= 64");
    if (cfg.surface.kind == SurfaceKind::Annulus && !(cfg.surface.inner_radius >= 0.1 && cfg.surface.inner_radius <= 0.9))
      schema("surface.inner_radius", "must lie in [0.1, 0.9]");

    if (!j.contains("domain")) schema("domain", "is required");
    cfg.domain = parse_domain(j.at("domain"));
    if (!j.contains("f1")) schema("f1", "is required");
    cfg.f1 = parse_map(j.at("f1"), cfg.domain.dimension, "f1");

    cfg.compact_K = get_or<double>(j, "compact_K", 0.5, "");
    cfg.eps = get_or<double>(j, "eps", 0.05, "");
    if (!(cfg.eps > 0.0)) schema("eps", "must be > 0");
    if (!(cfg.compact_K >= 0.0 && cfg.compact_K < 1.0)) schema("compact_K", "must lie in [0, 1)");

    for (const auto& e : j.value("interp", json::array())) {
      InterpolationPoint ip;
      if (!e.contains("point")) schema("interp.point", "is required");
      ip.point = read_complex(e.at("point"), "interp.point");
      ip.order = get_or<int>(e, "order", 0, "interp.");
      if (ip.order < 0) schema("interp.order", "must be >= 0");
      if (e.contains("jet")) {
        const json& jet = e.at("jet");
        if (!jet.is_array() || static_cast<int>(jet.size()) != ip.order + 1)
          schema("interp.jet", "needs order + 1 derivative vectors");
        for (const auto& d : jet) {
          if (!d.is_array() || static_cast<int>(d.size()) != cfg.domain.dimension)
            schema("interp.jet", "each derivative needs one entry per coordinate");
          Eigen::VectorXcd v(cfg.domain.dimension);
          for (int i = 0; i < cfg.domain.dimension; ++i) v[i] = read_complex(d[i], "interp.jet");
          ip.jet.push_back(v);
        }
      }
      if (!cfg.surface.contains(ip.point) || std::abs(ip.point) >= 1.0 ||
          (cfg.surface.kind == SurfaceKind::Annulus && std::abs(ip.point) <= cfg.surface.inner_radius))
        schema("interp.point", "must lie inside the surface");
      for (const auto& other : cfg.interp)
        if (std::abs(other.point - ip.point) < 1e-12) schema("interp.point", "points must be distinct");
      cfg.interp.push_back(std::move(ip));
    }
    auto read_points = [&](const char* key, std::vector<DivisorEntry>& out) {
      const std::string k(key);
      for (const auto& e : j.value(key, json::array())) {
        DivisorEntry p;
        if (!e.contains("point")) schema(k + ".point", "is required");
        p.point = read_complex(e.at("point"), k + ".point");
        p.order = get_or<int>(e, "order", 1, k + ".");
        if (p.order < 1) schema(k + ".order", "must be >= 1");
        out.push_back(p);
      }
    };
    read_points("divisor", cfg.zeros);
    read_points("poles", cfg.poles);

    const json tol = j.value("tolerances", json::object());
    cfg.tol_fit = get_or<double>(tol, "fit", cfg.tol_fit, "tolerances.");
    cfg.tol_rh = get_or<double>(tol, "rh", cfg.tol_rh, "tolerances.");
    cfg.tol_boundary = get_or<double>(tol, "boundary", cfg.tol_boundary, "tolerances.");
    if (!(cfg.tol_fit > 0.0)) schema("tolerances.fit", "must be > 0");
    if (!(cfg.tol_rh > 0.0)) schema("tolerances.rh", "must be > 0");
    if (!(cfg.tol_boundary > 0.0)) schema("tolerances.boundary", "must be > 0");

    const json grid = j.value("grid", json::object());
    cfg.A = get_or<int>(grid, "A", cfg.A, "grid.");
    if (!is_power_of_two(cfg.A) || cfg.A < 8) schema("grid.A", "must be a power of two >= 8");

    const json sur = j.value("surrogate", json::object());
    cfg.J = get_or<int>(sur, "J", cfg.J, "surrogate.");
    cfg.N = get_or<int>(sur, "N", cfg.N, "surrogate.");
    cfg.d_plus = get_or<int>(sur, "d_plus", cfg.d_plus, "surrogate.");
    cfg.d_minus = get_or<int>(sur, "d_minus", cfg.d_minus, "surrogate.");
    cfg.report_radius = get_or<double>(sur, "report_radius", cfg.report_radius, "surrogate.");
    if (cfg.J < 1) schema("surrogate.J", "must be >= 1");
    if (cfg.N < 1 || cfg.N > cfg.J) schema("surrogate.N", "must satisfy 1 <= N <= J");
    if (cfg.d_plus < -1) schema("surrogate.d_plus", "must be >= 0");
    if (cfg.d_minus < 0) schema("surrogate.d_minus", "must be >= 0");
    if (!(cfg.report_radius > 0.0 && cfg.report_radius < 1.0)) schema("surrogate.report_radius", "must lie in (0, 1)");

    if (j.contains("collar") && !j.at("collar").is_null()) {
      const json& c = j.at("collar");
      CollarBand b;
      b.rho_lo = get_or<double>(c, "rho_lo", b.rho_lo, "collar.");
      b.rho_hi = get_or<double>(c, "rho_hi", b.rho_hi, "collar.");
      b.lambda_min = get_or<double>(c, "lambda_min", b.lambda_min, "collar.");
      if (!(b.rho_lo < b.rho_hi && b.rho_hi < 0.0)) schema("collar", "needs rho_lo < rho_hi < 0");
      if (!(b.lambda_min > 0.0)) schema("collar.lambda_min", "must be > 0");
      cfg.band = b;
    }

    const json rh = j.value("rh", json::object());
    cfg.rh_max_iter = get_or<int>(rh, "max_iter", cfg.rh_max_iter, "rh.");
    if (cfg.rh_max_iter < 1) schema("rh.max_iter", "must be >= 1");

    cfg.hopf_floor = get_or<double>(j, "hopf_floor", cfg.hopf_floor, "");
    if (!(cfg.hopf_floor > 0.0)) schema("hopf_floor", "must be > 0");
    const std::string mode = get_or<std::string>(j, "admissibility", "strict", "");
    if (mode != "strict" && mode != "remark22") schema("admissibility", "must be strict or remark22");
    cfg.admissibility = mode == "strict" ? AdmissibilityMode::Strict : AdmissibilityMode::TwoPositive;
    cfg.pert_h = get_or<double>(j, "pert_h", cfg.pert_h, "");
    if (!(cfg.pert_h >= 0.0)) schema("pert_h", "must be >= 0");
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed, "");
    cfg.experimental_annulus = get_or<bool>(j.value("experimental", json::object()), "annulus", false, "experimental.");
    if (cfg.surface.kind == SurfaceKind::Annulus) {
      if (!cfg.experimental_annulus) schema("experimental.annulus", "must be true to run on the annulus");
      if (!cfg.interp.empty()) schema("interp", "interpolation is not supported on the annulus");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, kStage, std::string("malformed config: ") + e.what());
  }
  return cfg;
}

std::vector<CxPoint> f1_boundary_samples(const RunConfig& cfg) {
  std::vector<CxPoint> out;
  for (int comp = 0; comp < cfg.surface.components(); ++comp)
    for (int k = 0; k < cfg.surface.K; ++k) out.push_back(cfg.f1.eval(cfg.surface.boundary_point(comp, k)));
  return out;
}

double domain_depth(const DefiningFunction& df, const std::vector<CxPoint>& f1_samples) {
  const int n = df.dimension();
  double lowest = df.rho(CxPoint::Zero(n));
  const double b = 0.25 * df.box_radius();
  const Complex levels[] = {0.0, b, -b, Complex(0.0, b), Complex(0.0, -b)};
  long total = 1;
  for (int i = 0; i < n; ++i) total *= 5;
  for (long code = 0; code < total; ++code) {
    CxPoint z(n);
    long c = code;
    for (int i = 0; i < n; ++i, c /= 5) z[i] = levels[c % 5];
    lowest = std::min(lowest, df.rho(z));
  }
  for (const auto& p : f1_samples)
    for (double t : {0.25, 0.5, 0.75, 1.0})
      if (df.in_box(t * p)) lowest = std::min(lowest, df.rho(t * p));
  return -lowest;
}

void materialize_defaults(RunConfig& cfg, const DefiningFunction& df) {
  if (cfg.d_plus < 0) cfg.d_plus = cfg.surface.K / 4;
  if (cfg.band) return;
  const auto samples = f1_boundary_samples(cfg);
  const double depth = domain_depth(df, samples);
  if (!(depth > 0.0)) throw Error(ErrorKind::Domain, "pipeline.collar", "domain has no interior point among samples");
  double lambda = std::numeric_limits<double>::infinity();
  for (const auto& p : samples) {
    if (!df.in_box(p)) continue;
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(df.hess_mixed(p), Eigen::EigenvaluesOnly).eigenvalues();
    lambda = std::min(lambda, ev.minCoeff());
  }
  if (!std::isfinite(lambda) || lambda <= 0.0) lambda = 1e-6;
  cfg.band = CollarBand::from_scale(depth, lambda);
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["surface"] = {{"kind", cfg.surface.kind == SurfaceKind::Disc ? "disc" : "annulus"},
                  {"K", cfg.surface.K},
                  {"inner_radius", cfg.surface.inner_radius}};
  j["domain"] = domain_json(cfg.domain);
  j["f1"] = map_json(cfg.f1);
  j["compact_K"] = cfg.compact_K;
  j["eps"] = cfg.eps;
  json interp = json::array();
  for (const auto& ip : cfg.interp) {
    json e{{"point", complex_json(ip.point)}, {"order", ip.order}};
    if (!ip.jet.empty()) {
      json jet = json::array();
      for (const auto& d : ip.jet) {
        json row = json::array();
        for (long i = 0; i < d.size(); ++i) row.push_back(complex_json(d[i]));
        jet.push_back(row);
      }
      e["jet"] = jet;
    }
    interp.push_back(e);
  }
  j["interp"] = interp;
  auto points_json = [](const std::vector<DivisorEntry>& v) {
    json out = json::array();
    for (const auto& p : v) out.push_back({{"point", complex_json(p.point)}, {"order", p.order}});
    return out;
  };
  j["divisor"] = points_json(cfg.zeros);
  j["poles"] = points_json(cfg.poles);
  j["tolerances"] = {{"fit", cfg.tol_fit}, {"rh", cfg.tol_rh}, {"boundary", cfg.tol_boundary}};
  j["grid"] = {{"A", cfg.A}};
  j["surrogate"] = {{"J", cfg.J},
                    {"N", cfg.N},
                    {"d_plus", cfg.d_plus},
                    {"d_minus", cfg.d_minus},
                    {"report_radius", cfg.report_radius}};
  if (cfg.band)
    j["collar"] = {{"rho_lo", cfg.band->rho_lo}, {"rho_hi", cfg.band->rho_hi}, {"lambda_min", cfg.band->lambda_min}};
  else
    j["collar"] = nullptr;
  j["rh"] = {{"max_iter", cfg.rh_max_iter}};
  j["hopf_floor"] = cfg.hopf_floor;
  j["admissibility"] = cfg.admissibility == AdmissibilityMode::Strict ? "strict" : "remark22";
  j["pert_h"] = cfg.pert_h;
  j["seed"] = cfg.seed;
  j["experimental"] = {{"annulus", cfg.experimental_annulus}};
  return j;
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) schema("--set", "expected key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  json* node = &j;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i]) || !(*node)[parts[i]].is_object()) (*node)[parts[i]] = json::object();
    node = &(*node)[parts[i]];
  }
  (*node)[parts.back()] = value;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "config", "cannot read " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::Schema, "config", path + " is not valid JSON");
  return j;
}

}  // namespace holopush
