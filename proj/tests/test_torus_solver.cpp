#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "conteq/diagnostics.hpp"
#include "conteq/torus_solver.hpp"

using namespace conteq;

namespace {

AnalyticScalar cos_potential(int n, bool re_slice, double amplitude) {
  AnalyticScalar phi0(2 * n);
  Term t1;
  t1.coeff = amplitude;
  t1.factors = unit_factors(2 * n);
  t1.factors[0] = Factor{Factor::COS, 1.0, 0.0};
  if (!re_slice) t1.factors[1] = Factor{Factor::COS, 1.0, 0.3};
  phi0.add(t1);
  return phi0;
}

SolverConfig config_with(std::vector<double> ts) {
  SolverConfig c;
  c.t_schedule = std::move(ts);
  return c;
}

}  // namespace

TEST_CASE("flat torus: phi stays identically zero in both variants") {
  TorusGrid grid;
  grid.n_complex = 1;
  grid.N = 32;
  for (Variant v : {Variant::unnormalized, Variant::normalized}) {
    TorusSolver s(grid, v, ScalarField(grid.size(), 0.0), Mat::Identity(1, 1),
                  config_with({0.0, 1.0, 100.0, 1000.0}));
    for (double t : {0.0, 1.0, 100.0, 1000.0}) {
      REQUIRE(s.solve_at(t));
      s.accept();
      CHECK(s.residual_norm() < 1e-12);
      double sup = 0.0;
      for (double x : s.phi()) sup = std::max(sup, std::abs(x));
      CHECK(sup < 1e-12);
      CHECK(s.newton_iters() == 0);  // the exact solution is a Newton fixed point
    }
  }
}

TEST_CASE("perturbed n = 1 torus at t = 1: quadratic Newton convergence") {
  TorusGrid grid;
  grid.n_complex = 1;
  grid.N = 64;
  TorusSolver s(grid, Variant::unnormalized,
                TorusSolver::sample(grid, cos_potential(1, false, 0.3)), Mat::Identity(1, 1),
                config_with({1.0}));
  REQUIRE(s.solve_at(1.0));
  CHECK(s.residual_norm() < 1e-10);
  CHECK(s.newton_iters() >= 2);
  // residual_{k+1} / residual_k^2 bounded along the iteration
  for (double ratio : s.newton_history()) CHECK(ratio < 100.0);
}

TEST_CASE("linearization sanity: small perturbations produce first-order residuals") {
  TorusGrid grid;
  grid.n_complex = 1;
  grid.N = 32;
  TorusSolver s(grid, Variant::normalized,
                TorusSolver::sample(grid, cos_potential(1, false, 0.2)), Mat::Identity(1, 1),
                config_with({0.5}));
  REQUIRE(s.solve_at(0.5));
  s.accept();
  // restarting from the converged state is a Newton fixed point
  REQUIRE(s.solve_at(0.5));
  CHECK(s.newton_iters() == 0);

  // |F(u* + eps d)| scales linearly in eps
  std::mt19937_64 rng(3);
  const ScalarField dir = TorusSolver::sample(grid, random_scalar(2, rng, 4, 1.0, 2));
  auto res_at_eps = [&](double eps) {
    ScalarField u = s.unknown();
    for (size_t i = 0; i < u.size(); ++i) u[i] += eps * dir[i];
    double m = 0.0;
    for (double v : s.residual_at(u, 0.5)) m = std::max(m, std::abs(v));
    return m;
  };
  const double r4 = res_at_eps(1e-4), r5 = res_at_eps(1e-5), r6 = res_at_eps(1e-6);
  CHECK(r4 / r5 == doctest::Approx(10.0).epsilon(0.05));
  CHECK(r5 / r6 == doctest::Approx(10.0).epsilon(0.05));
  CHECK(r4 < 1e-2);
}

TEST_CASE("uniqueness: perturbed restart returns to the same potential") {
  TorusGrid grid;
  grid.n_complex = 1;
  grid.N = 48;
  TorusSolver s(grid, Variant::normalized,
                TorusSolver::sample(grid, cos_potential(1, false, 0.25)), Mat::Identity(1, 1),
                config_with({2.0}));
  REQUIRE(s.solve_at(2.0));
  s.accept();
  const ScalarField u_ref = s.unknown();

  // independent solver instance, warm-started differently: same fixed point
  TorusSolver s2(grid, Variant::normalized,
                 TorusSolver::sample(grid, cos_potential(1, false, 0.25)), Mat::Identity(1, 1),
                 config_with({2.0}));
  REQUIRE(s2.solve_at(0.7));
  REQUIRE(s2.solve_at(2.0));
  double diff = 0.0;
  for (size_t i = 0; i < u_ref.size(); ++i) diff = std::max(diff, std::abs(u_ref[i] - s2.unknown()[i]));
  CHECK(diff < 1e-8);
}

TEST_CASE("contracted identity and estimates on a short normalized sweep") {
  TorusGrid grid;
  grid.n_complex = 1;
  grid.N = 64;
  const ScalarField phi0 = TorusSolver::sample(grid, cos_potential(1, false, 0.3));
  double phi0_sup = 0.0;
  for (double v : phi0) phi0_sup = std::max(phi0_sup, std::abs(v));

  TorusSolver s(grid, Variant::normalized, phi0, Mat::Identity(1, 1),
                config_with(log_schedule(1e-2, 100.0, 8)));
  double contracted = 0.0, phi_scaled = 0.0;
  std::vector<double> ts, eps;
  for (double t : s.config().t_schedule) {
    REQUIRE(s.solve_at(t));
    s.accept();
    RowExtras ex;
    const DiagnosticsRow row = torus_row(s, &ex);
    contracted = std::max(contracted, ex.contracted_residual);
    phi_scaled = std::max(phi_scaled, row.sup_abs_phi_scaled);
    if (t >= 1.0) {
      ts.push_back(std::log(t));
      eps.push_back(std::log(row.equivalence_eps));
    }
    CHECK(ex.maclaurin_worst >= -1e-10);
    if (t > 0.0) CHECK(s.normalization_mismatch() < 1e-10);
  }
  CHECK(contracted < 1e-5);
  CHECK(phi_scaled <= phi0_sup + 1e-6);
  CHECK(least_squares_fit(ts, eps).slope < 0.0);
}

TEST_CASE("re-slice n = 2 torus solves and satisfies the contracted identity") {
  TorusGrid grid;
  grid.n_complex = 2;
  grid.N = 24;
  grid.re_slice = true;
  TorusSolver s(grid, Variant::normalized,
                TorusSolver::sample(grid, cos_potential(2, true, 0.25)), Mat::Identity(2, 2),
                config_with(log_schedule(1e-2, 50.0, 6)));
  double contracted = 0.0;
  for (double t : s.config().t_schedule) {
    REQUIRE(s.solve_at(t));
    s.accept();
    RowExtras ex;
    torus_row(s, &ex);
    contracted = std::max(contracted, ex.contracted_residual);
  }
  CHECK(contracted < 1e-5);
}

TEST_CASE("positivity guard rejects states rather than producing NaNs") {
  TorusGrid grid;
  grid.n_complex = 1;
  grid.N = 16;
  // amplitude close to breaking omega_0 > 0 still has to construct
  TorusSolver s(grid, Variant::unnormalized,
                TorusSolver::sample(grid, cos_potential(1, false, 0.8)), Mat::Identity(1, 1),
                config_with({0.1}));
  CHECK(s.solve_at(0.1));
  // a potential with ddbar phi0 exceeding 1 fails the positivity invariant
  CHECK_THROWS_AS(TorusSolver(grid, Variant::unnormalized,
                              TorusSolver::sample(grid, cos_potential(1, false, 2.5)),
                              Mat::Identity(1, 1), config_with({0.1})),
                  PointError);
}
