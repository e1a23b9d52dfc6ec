#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "holopush/config.hpp"
#include "holopush/error.hpp"
#include "holopush/pipeline.hpp"

using namespace holopush;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

json fixture(const std::string& name) { return read_json_file(std::string(HOLOPUSH_FIXTURES) + "/" + name); }

const PipelineResult& ball_run() {
  static const PipelineResult res = run_pipeline(parse_config(fixture("ball.json")));
  return res;
}

const PipelineResult& skewed_run() {
  static const PipelineResult res = run_pipeline(parse_config(fixture("skewed.json")));
  return res;
}

ClauseStatus clause(const ProperMapReport& rep, const std::string& name) {
  for (const auto& c : rep.clauses)
    if (c.name == name) return c.status;
  FAIL("missing clause " << name);
  return ClauseStatus::NotEvaluated;
}

int order_at_zero(const MapData& m) { return m.zeta.divisor.order_at(0.0); }

}  // namespace

TEST_CASE("ball run reproduces the closed form") {
  const PipelineResult& res = ball_run();
  REQUIRE(!res.report.error);
  REQUIRE(res.map);
  const MapData& m = *res.map;
  const int w = order_at_zero(m);
  const double c = res.report.run_info["disc_scale"].get<double>();
  // f = (0.9 x, c zeta) with |c zeta| = sqrt(0.19) |x|^w.
  for (int k = 0; k < 256; ++k) {
    const Complex x = std::polar(1.0, 2.0 * kPi * k / 256);
    const Eigen::VectorXcd f = m.eval(x);
    CHECK(std::abs(f[0] - 0.9 * x) <= 1e-14);
    CHECK(std::abs(std::abs(f[1]) - std::sqrt(0.19)) <= 1e-9);
    CHECK(std::norm(f[0]) + std::norm(f[1]) == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(c == doctest::Approx(std::sqrt(0.19) / 0.5).epsilon(1e-9));
  CHECK(res.report.boundary_residual <= 1e-9);
  CHECK(res.report.interior_negativity < 0.0);
  CHECK(res.report.all_pass());
  CHECK(res.report.approx_error == doctest::Approx(std::sqrt(0.19) * std::pow(0.5, w)).epsilon(1e-9));
  CHECK(res.report.approx_error < 0.05);
  // Interpolation to order 2 at 0 forces a zero of order >= 3.
  CHECK(w >= 3);
  REQUIRE(res.report.jet_errors.size() == 1);
  CHECK(res.report.jet_errors[0].error <= 1e-8);
  CHECK(clause(res.report, "interpolation") == ClauseStatus::Pass);
  CHECK(clause(res.report, "immersion") == ClauseStatus::NotClaimed);
  CHECK(clause(res.report, "embedding") == ClauseStatus::NotClaimed);
  // d/dr (0.81 r^2 + 0.19 r^{2w}) at r = 1.
  CHECK(res.report.hopf_margin == doctest::Approx(1.62 + 0.38 * w).epsilon(1e-9));
}

TEST_CASE("the chosen zero order is the first that passes eps") {
  const PipelineResult& res = ball_run();
  const json& seq = res.report.run_info["approximation_sequence"];
  REQUIRE(seq.size() >= 1);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    CHECK(seq[i]["approx_error"].get<double>() >= 0.05);
    CHECK(seq[i + 1]["approx_error"].get<double>() < seq[i]["approx_error"].get<double>());
  }
  CHECK(seq.back()["approx_error"].get<double>() < 0.05);
  CHECK(seq.back()["order_at_0"].get<int>() == order_at_zero(*res.map));
  CHECK(res.report.run_info["approximation_monotone"].get<bool>());
}

TEST_CASE("f1 itself is not proper") {
  const MapData& m = *ball_run().map;
  CenterFamily cf = m.cf;
  for (auto& Hj : cf.surrogate) Hj = LaurentMap::zero(cf.dimension());
  const MapData flat = make_map(cf, m.zeta);
  RunConfig cfg = ball_run().config;
  const auto df = cfg.domain.make();
  const ProperMapReport rep = verify_map(flat, cfg, *df);
  CHECK(rep.boundary_residual == doctest::Approx(0.19).epsilon(1e-12));
  CHECK(clause(rep, "proper") == ClauseStatus::Fail);
  CHECK(!rep.all_pass());
}

TEST_CASE("interpolation against given jets") {
  json j = fixture("ball.json");
  j["interp"] = json::array({{{"point", {0.0, 0.0}}, {"order", 1}, {"jet", {{0.0, 0.0}, {0.9, 0.0}}}}});
  RunConfig cfg = parse_config(j);
  const MapData& m = *ball_run().map;  // zero of order >= 3 at 0
  const auto df = cfg.domain.make();
  materialize_defaults(cfg, *df);
  const ProperMapReport ok = verify_map(m, cfg, *df);
  REQUIRE(ok.jet_errors.size() == 1);
  CHECK(ok.jet_errors[0].error <= 1e-8);
  CHECK(clause(ok, "interpolation") == ClauseStatus::Pass);

  j["interp"][0]["jet"] = {{0.0, 0.0}, {0.8, 0.0}};
  cfg = parse_config(j);
  materialize_defaults(cfg, *df);
  const ProperMapReport bad = verify_map(m, cfg, *df);
  CHECK(bad.jet_errors[0].error == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(clause(bad, "interpolation") == ClauseStatus::Fail);
}

TEST_CASE("interpolation off the origin") {
  json j = fixture("ball.json");
  j["interp"] = json::array({{{"point", {0.3, -0.2}}, {"order", 1}}});
  const PipelineResult res = run_pipeline(parse_config(j));
  REQUIRE(!res.report.error);
  CHECK(res.map->zeta.divisor.order_at(Complex(0.3, -0.2)) == 2);
  CHECK(res.report.jet_errors[0].error <= 1e-6);
  CHECK(res.report.all_pass());
}

TEST_CASE("collar violation is a stage error") {
  const PipelineResult res = run_pipeline(parse_config(fixture("collar_violation.json")));
  REQUIRE(res.report.error);
  CHECK(res.report.error->kind() == ErrorKind::CollarViolation);
  CHECK(res.report.error->stage() == "pipeline.collar");
  CHECK(!res.map);
  for (const auto& c : res.report.clauses) CHECK(c.status == ClauseStatus::NotEvaluated);
  const json j = res.report.to_json();
  CHECK(j["status"] == "error");
  CHECK(j["error"]["kind"] == "CollarViolation");
  CHECK(j["clauses"].size() == 7);
}

TEST_CASE("tangency and nonconvergence fixtures") {
  const PipelineResult t = run_pipeline(parse_config(fixture("tangency.json")));
  REQUIRE(t.report.error);
  CHECK(t.report.error->kind() == ErrorKind::Tangency);

  const PipelineResult n = run_pipeline(parse_config(fixture("nonconvergence.json")));
  REQUIRE(n.report.error);
  CHECK(n.report.error->kind() == ErrorKind::Nonconvergence);
  CHECK(n.report.error->stage() == "rh_solver.solve");
  CHECK(std::string(n.report.error->what()).find("defect history") != std::string::npos);
  CHECK(n.trace.size() == 1);
  REQUIRE(n.curves);
}

TEST_CASE("non-holomorphic centers need a Laurent surrogate") {
  json j = fixture("ball.json");
  j["domain"]["dimension"] = 3;
  j["f1"] = json::array({{{"coordinate", 0}, {"exponent", 1}, {"re", 0.7}},
                         {{"coordinate", 0}, {"exponent", 2}, {"re", 0.15}},
                         {{"coordinate", 1}, {"exponent", 1}, {"re", 0.3}},
                         {{"coordinate", 2}, {"exponent", 0}, {"re", 0.1}}});
  j["collar"] = {{"rho_lo", -0.6}, {"rho_hi", -0.02}, {"lambda_min", 1.0}};
  j.erase("interp");
  const PipelineResult fit = run_pipeline(parse_config(j));
  REQUIRE(fit.report.error);
  CHECK(fit.report.error->kind() == ErrorKind::Fit);
  CHECK(fit.report.error->stage() == "pipeline.fit");

  j["surrogate"] = {{"d_minus", 16}};
  const PipelineResult res = run_pipeline(parse_config(j));
  REQUIRE(!res.report.error);
  CHECK(res.map->cf.d_minus == 16);
  CHECK(order_at_zero(*res.map) >= 16);
  CHECK(res.report.composition_defect <= 1e-12);
  CHECK(res.report.all_pass());
  CHECK(clause(res.report, "immersion") == ClauseStatus::Pass);
  // H has poles at 0, f does not.
  CHECK(res.map->f.lowest() >= 0);
}

TEST_CASE("skewed domain: iterated solve and invariants") {
  const PipelineResult& res = skewed_run();
  REQUIRE(!res.report.error);
  CHECK(res.report.all_pass());
  CHECK(res.trace.size() >= 2);
  CHECK(res.report.composition_defect <= 1e-12);
  CHECK(res.report.max_rho_interior <= res.report.max_rho_boundary + 1e-10);
  CHECK(res.report.max_zeta_interior <= res.report.max_zeta_boundary + 1e-10);
  CHECK(res.map->zeta.holomorphy_defect <= 1e-8);
  CHECK(res.report.run_info["approximation_monotone"].get<bool>());
  // Not rotationally symmetric: the curves vary with x.
  CHECK(res.curves->max_radius() - res.curves->min_radius() > 0.05);
}

TEST_CASE("immersion audit") {
  const MapData& m = *ball_run().map;
  const ImmersionAudit a = immersion_audit(m, ball_run().config);
  // f' = (0.9, c zeta'), so 0.9 <= |f'| <= sqrt(0.81 + max |c zeta'|^2).
  double max_dz = 0.0;
  for (int k = 0; k < 256; ++k) max_dz = std::max(max_dz, std::abs(m.derivative(std::polar(1.0, 2.0 * kPi * k / 256))[1]));
  CHECK(a.immersion_margin >= 0.9 - 1e-12);
  CHECK(a.immersion_margin <= std::sqrt(0.81 + max_dz * max_dz));
  CHECK(a.separation == doctest::Approx(4.0 * kPi / 256));
  CHECK(a.grid_points == 1537);
  CHECK(a.injectivity_audit > 0.0);
  CHECK(a.recommendations.empty());
}

TEST_CASE("constant f1: immersion margin vanishes") {
  json j = fixture("ball.json");
  j["f1"] = json::array({{{"coordinate", 0}, {"exponent", 0}, {"re", 0.9}}});
  j.erase("interp");
  const PipelineResult two = run_pipeline(parse_config(j));
  REQUIRE(!two.report.error);
  CHECK(two.report.immersion_margin <= 1e-12);
  CHECK(clause(two.report, "immersion") == ClauseStatus::NotClaimed);
  CHECK(!two.report.warnings.empty());
  CHECK(two.report.all_pass());

  j["domain"]["dimension"] = 3;
  const PipelineResult three = run_pipeline(parse_config(j));
  REQUIRE(!three.report.error);
  CHECK(clause(three.report, "immersion") == ClauseStatus::Fail);
  REQUIRE(!three.report.recommendations.empty());
  CHECK(three.report.recommendations[0].find("pert_h") != std::string::npos);
}

TEST_CASE("n = 4 ball run embeds") {
  json j = fixture("ball.json");
  j["domain"]["dimension"] = 4;
  j.erase("interp");
  const PipelineResult res = run_pipeline(parse_config(j));
  REQUIRE(!res.report.error);
  CHECK(res.report.run_info["perturbed"].get<bool>());
  CHECK(res.report.injectivity_audit > 0.0);
  CHECK(clause(res.report, "embedding") == ClauseStatus::Pass);
  CHECK(clause(res.report, "immersion") == ClauseStatus::Pass);
  CHECK(res.report.all_pass());
}

TEST_CASE("map dump round trip") {
  const PipelineResult& res = skewed_run();
  const MapData back = map_from_json(json::parse(map_to_json(*res.map).dump()));
  for (int p = res.map->f.lowest(); p <= res.map->f.highest(); ++p)
    for (int i = 0; i < 2; ++i) CHECK(std::abs(back.f.coefficient(i, p) - res.map->f.coefficient(i, p)) <= 1e-12);
  const auto df = res.config.domain.make();
  const ProperMapReport rep = verify_map(back, res.config, *df);
  CHECK(std::abs(rep.boundary_residual - res.report.boundary_residual) <= 1e-12);
  CHECK(std::abs(rep.approx_error - res.report.approx_error) <= 1e-12);
  CHECK(std::abs(rep.hopf_margin - res.report.hopf_margin) <= 1e-12);
  CHECK(rep.all_pass());

  CHECK_THROWS_AS(map_from_json(json::object()), Error);
  CHECK_THROWS_AS(map_from_json(json{{"dimension", 2}}), Error);
}

TEST_CASE("scaling zeta breaks properness") {
  const PipelineResult& res = ball_run();
  json dump = map_to_json(*res.map);
  const int lowest = dump["zeta"]["log_coeffs"]["lowest"].get<int>();
  dump["zeta"]["log_coeffs"]["re"][-lowest] = dump["zeta"]["log_coeffs"]["re"][-lowest].get<double>() + std::log(1.5);
  const MapData scaled = map_from_json(dump);
  const auto df = res.config.domain.make();
  const ProperMapReport rep = verify_map(scaled, res.config, *df);
  CHECK(clause(rep, "proper") == ClauseStatus::Fail);
  // |f|^2 - 1 = 0.81 + 2.25 * 0.19 - 1 on the boundary.
  CHECK(rep.boundary_residual == doctest::Approx(1.25 * 0.19).epsilon(1e-8));
}

TEST_CASE("annulus run") {
  const PipelineResult res = run_pipeline(parse_config(fixture("annulus.json")));
  REQUIRE(!res.report.error);
  CHECK(res.map->zeta.period_residual <= 1e-6);
  CHECK(res.map->zeta.monomial_order == -1);
  CHECK(clause(res.report, "approximation") == ClauseStatus::NotClaimed);
  CHECK(clause(res.report, "proper") == ClauseStatus::Pass);
  CHECK(res.report.composition_defect <= 1e-12);

  json j = fixture("annulus.json");
  j["experimental"]["annulus"] = false;
  CHECK_THROWS_AS(parse_config(j), Error);
}

TEST_CASE("reports are deterministic") {
  const PipelineResult again = run_pipeline(parse_config(fixture("ball.json")));
  CHECK(again.report.to_json().dump() == ball_run().report.to_json().dump());
}
