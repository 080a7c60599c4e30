#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "conteq/diagnostics.hpp"
#include "conteq/sphere_solver.hpp"

using namespace conteq;

namespace {

SolverConfig config_with(std::vector<double> ts) {
  SolverConfig c;
  c.t_schedule = std::move(ts);
  return c;
}

}  // namespace

TEST_CASE("area and Ricci mass by quadrature give the singular time") {
  SphereSolver s(SphereProfile::round(2.0), Variant::unnormalized, 256, config_with({0.0}));
  CHECK(s.area() == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-12));
  CHECK(s.ricci_mass() == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-6));
  CHECK(s.maximal_time() == doctest::Approx(1.0).epsilon(1e-6));

  // doubling the initial area doubles the singular time
  SphereSolver s2(SphereProfile::round(4.0), Variant::unnormalized, 256, config_with({0.0}));
  CHECK(s2.maximal_time() == doctest::Approx(2.0).epsilon(1e-6));

  // the Ricci mass is metric independent (Gauss-Bonnet): perturbed profile
  SphereSolver sp(SphereProfile::perturbed(2.0, 0.2), Variant::unnormalized, 256, config_with({0.0}));
  CHECK(sp.ricci_mass() == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-5));
  CHECK(sp.maximal_time() == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("round profile: the solution is (1 - t) omega_0 to solver tolerance") {
  SphereSolver s(SphereProfile::round(2.0), Variant::unnormalized, 256,
                 config_with({0.1, 0.5, 0.9, 0.99}));
  for (double t : {0.1, 0.5, 0.9, 0.99}) {
    REQUIRE(s.solve_at(t));
    s.accept();
    double rel = 0.0;
    const auto& a = s.density();
    const auto& a0 = s.density0();
    for (int i = 0; i < s.cells(); ++i)
      rel = std::max(rel, std::abs(a[static_cast<size_t>(i)] / ((1.0 - t) * a0[static_cast<size_t>(i)]) - 1.0));
    CHECK(rel < 1e-6);

    // scalar curvature is 1/(1-t) and the contracted identity closes
    const auto R = s.scalar_curvature();
    const auto tr = s.trace_of_initial();
    for (int i = 0; i < s.cells(); ++i) {
      CHECK(std::abs(R[static_cast<size_t>(i)] - 1.0 / (1.0 - t)) < 1e-6 / (1.0 - t));
      CHECK(std::abs(tr[static_cast<size_t>(i)] - 1.0 - t * R[static_cast<size_t>(i)]) < 1e-6);
    }
  }
}

TEST_CASE("continuation detects the singular time within one percent") {
  SolverConfig cfg = config_with(log_schedule(0.05, 1.05, 15, true));
  cfg.t_schedule = {0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 0.95, 1.0, 1.05};
  SphereSolver s(SphereProfile::round(2.0), Variant::unnormalized, 256, cfg);
  const ContinuationOutcome out = continue_in_t(s, cfg);
  CHECK(out.failed);
  CHECK(std::abs(out.empirical_T - 1.0) < 0.01);
}

TEST_CASE("blow-up profile fit recovers T and the coefficient") {
  SolverConfig cfg;
  cfg.t_schedule = {0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
  SphereSolver s(SphereProfile::round(2.0), Variant::unnormalized, 256, cfg);
  std::vector<double> ts, rs;
  for (double t : cfg.t_schedule) {
    REQUIRE(s.solve_at(t));
    s.accept();
    RowExtras ex;
    const DiagnosticsRow row = sphere_row(s, &ex);
    ts.push_back(t);
    rs.push_back(row.scalar_R_sup);
    CHECK(std::abs(row.scalar_R_sup * (1.0 - t) - 1.0) < 0.05);
    CHECK(ex.contracted_residual < 1e-5);
  }
  const BlowupFit fit = fit_blowup(ts, rs);
  CHECK(std::abs(fit.T - 1.0) < 0.01);
  CHECK(std::abs(fit.a - 1.0) < 0.05);
}

TEST_CASE("perturbed profile: diverging curvature, fitted T within two percent") {
  SolverConfig cfg;
  cfg.t_schedule = {0.0, 0.2, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 1.0, 1.05};
  SphereSolver s(SphereProfile::perturbed(2.0, 0.2), Variant::unnormalized, 256, cfg);
  const double Tq = s.maximal_time();
  std::vector<double> ts, rs;
  const ContinuationOutcome out = continue_in_t(s, cfg, [&](double t) {
    RowExtras ex;
    const DiagnosticsRow row = sphere_row(s, &ex);
    if (t >= 0.45) {
      ts.push_back(t);
      rs.push_back(row.scalar_R_sup);
    }
    CHECK(ex.contracted_residual < 1e-5);
  });
  CHECK(out.failed);
  CHECK(rs.back() > 50.0);  // curvature left every fixed bound before failure
  const BlowupFit fit = fit_blowup(ts, rs);
  CHECK(std::abs(fit.T - Tq) / Tq < 0.02);
  CHECK(std::abs(out.empirical_T - Tq) / Tq < 0.02);
}

TEST_CASE("newton refuses to cross the singular time") {
  SphereSolver s(SphereProfile::round(2.0), Variant::unnormalized, 128, config_with({0.99}));
  REQUIRE(s.solve_at(0.99));
  s.accept();
  CHECK_FALSE(s.solve_at(1.0));
  s.rollback();
  CHECK(s.t() == doctest::Approx(0.99));
}

TEST_CASE("normalized variant shares the singular time") {
  SolverConfig cfg;
  cfg.t_schedule = {0.0, 0.3, 0.6, 0.9, 1.0};
  SphereSolver s(SphereProfile::round(2.0), Variant::normalized, 128, cfg);
  const ContinuationOutcome out = continue_in_t(s, cfg);
  CHECK(out.failed);
  CHECK(std::abs(out.empirical_T - 1.0) < 0.02);
}
