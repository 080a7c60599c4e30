#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "conteq/model_ot.hpp"
#include "oracles.hpp"

using namespace conteq;
using conteq::testing::wedge_density_oracle;

namespace {

ot::ModelPoint mp(int n, std::initializer_list<double> coords) {
  ot::ModelPoint p;
  p.n = n;
  p.coords = RVec(2 * n);
  int i = 0;
  for (double c : coords) p.coords[i++] = c;
  return p;
}

}  // namespace

TEST_CASE("model forms at y = 1 in the (z, w) frame") {
  const auto p = mp(2, {0.3, 1.0, -0.2, 0.7});
  const Mat a = ot::alpha_form(2).eval(p.coords);
  const Mat b = ot::beta_form(2).eval(p.coords);
  const Mat g = ot::gamma_form(2).eval(p.coords);
  CHECK(std::abs(a(0, 0) - cplx{0.25, 0.0}) < 1e-15);
  CHECK(std::abs(a(1, 1)) < 1e-15);
  CHECK(std::abs(b(0, 0)) < 1e-15);
  CHECK(std::abs(b(1, 1) - cplx{1.0, 0.0}) < 1e-15);
  CHECK(std::abs(g(0, 0) - cplx{0.25, 0.0}) < 1e-15);
  const Mat w = ot::ot_metric(2).eval(p.coords);
  CHECK(std::abs(w(0, 0) - cplx{0.5, 0.0}) < 1e-15);
  CHECK(std::abs(w(1, 1) - cplx{1.0, 0.0}) < 1e-15);
  CHECK(min_eigenvalue(w) > 0.0);
}

TEST_CASE("alpha scaling homogeneity: y -> 2y quarters the diagonal entry") {
  const auto p1 = mp(2, {0.0, 0.8, 0.0, 0.0});
  const auto p2 = mp(2, {0.0, 1.6, 0.0, 0.0});
  const Mat a1 = ot::alpha_form(2).eval(p1.coords);
  const Mat a2 = ot::alpha_form(2).eval(p2.coords);
  CHECK(a2(0, 0).real() == doctest::Approx(a1(0, 0).real() / 4.0).epsilon(1e-14));
}

TEST_CASE("volume density matches the brute-force wedge expansion") {
  std::mt19937_64 rng(3);
  for (int n : {2, 3}) {
    const auto pts = ot::sample_points(n, rng, 5);
    for (const auto& p : pts) {
      std::vector<Mat> forms(static_cast<size_t>(n - 1), ot::alpha_form(n).eval(p.coords));
      forms.push_back(ot::beta_form(n).eval(p.coords));
      CHECK(ot::omega_density(n, p) ==
            doctest::Approx(wedge_density_oracle(forms)).epsilon(1e-12));
    }
  }
}

TEST_CASE("positivity of the model metric on the sample box") {
  std::mt19937_64 rng(5);
  for (int n : {2, 3}) {
    const auto pts = ot::sample_points(n, rng, 50);
    for (const auto& p : pts) CHECK(min_eigenvalue(ot::ot_metric(n).eval(p.coords)) > 1e-3);
  }
}

TEST_CASE("i ddbar log Omega = alpha on random points, n = 2 and n = 3") {
  std::mt19937_64 rng(7);
  for (int n : {2, 3}) {
    const auto pts = ot::sample_points(n, rng, 20);
    for (const auto& p : pts) CHECK(ot::ddbar_log_omega_residual(n, p) < 1e-8);
  }
}

TEST_CASE("volume identity is scale robust at large y") {
  auto p = mp(2, {0.4, 1000.0, 0.1, -0.3});
  CHECK(ot::ddbar_log_omega_residual(2, p) < 1e-6);
}

TEST_CASE("the volume identity needs the leaf coordinate") {
  const auto p = mp(2, {0.0, 1.0, 0.0, 0.0});
  CHECK_THROWS_AS(ot::ddbar_log_omega_residual(1, p), PointError);
}

TEST_CASE("strong flatness of the model metric holds with c = 1 exactly") {
  std::mt19937_64 rng(11);
  const auto pts = ot::sample_points(2, rng, 100);
  const AnalyticMatrixField g = ot::ot_metric(2);
  const auto rep = ot::strongly_flat_check([&g](const RVec& x) { return g.eval(x); }, 2, pts);
  CHECK(rep.strongly_flat);
  CHECK(rep.c == 1.0);
  CHECK(rep.relative_spread == 0.0);
}

TEST_CASE("a leafwise-varying perturbation breaks strong flatness") {
  std::mt19937_64 rng(13);
  const auto pts = ot::sample_points(2, rng, 50);
  const AnalyticMatrixField g = ot::ot_metric(2);
  const AnalyticMatrixField b = ot::beta_form(2);
  auto cand = [&](const RVec& x) -> Mat {
    return g.eval(x) + x[1] * b.eval(x);  // adds y_1 beta
  };
  const auto rep = ot::strongly_flat_check(cand, 2, pts);
  CHECK_FALSE(rep.strongly_flat);
}

TEST_CASE("conformal normalization restores strong flatness") {
  std::mt19937_64 rng(17);
  const auto pts = ot::sample_points(2, rng, 60);
  const AnalyticMatrixField g = ot::ot_metric(2);
  // pointwise conformal perturbation (1 + y/(1+y^2)) omega_OT
  auto cand = [&](const RVec& x) -> Mat {
    const double y = x[1];
    return (1.0 + y / (1.0 + y * y)) * g.eval(x);
  };
  const MatrixFn fixed = ot::conformal_normalize(cand, 2, pts, 1.0);
  const auto rep = ot::strongly_flat_check(fixed, 2, pts);
  CHECK(rep.strongly_flat);
  CHECK(rep.c == doctest::Approx(1.0).epsilon(1e-12));

  // already-flat input with its own constant: factor is identically one
  const MatrixFn same = ot::conformal_normalize([&g](const RVec& x) { return g.eval(x); }, 2, pts);
  for (size_t i = 0; i < 5; ++i)
    CHECK((same(pts[i].coords) - g.eval(pts[i].coords)).cwiseAbs().maxCoeff() < 1e-12);

  // doubled metric pulled to c = 1: constant factor 1/2
  const MatrixFn halved =
      ot::conformal_normalize([&g](const RVec& x) { return Mat(2.0 * g.eval(x)); }, 2, pts, 1.0);
  for (size_t i = 0; i < 5; ++i)
    CHECK((halved(pts[i].coords) - g.eval(pts[i].coords)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("weak parallelism: model metric yes, |w|^4 potential no, pluriharmonic yes") {
  std::mt19937_64 rng(19);
  const auto pts = ot::sample_points(2, rng, 40);
  const AnalyticMatrixField g = ot::ot_metric(2);
  CHECK(ot::weakly_parallel_check([&g](const RVec& x) { return g.eval(x); }, 2, pts)
            .weakly_parallel);

  // i ddbar |w|^4 has Theta_{wbar w} = 4 |w|^2
  AnalyticScalar w4(4);
  {
    Term t2;  // (u^2 + v^2)^2 = u^4 + 2 u^2 v^2 + v^4
    t2.factors = unit_factors(4);
    t2.factors[2] = Factor{Factor::POW, 4.0, 0.0};
    w4.add(t2);
    Term t3;
    t3.coeff = 2.0;
    t3.factors = unit_factors(4);
    t3.factors[2] = Factor{Factor::POW, 2.0, 0.0};
    t3.factors[3] = Factor{Factor::POW, 2.0, 0.0};
    w4.add(t3);
    Term t4;
    t4.factors = unit_factors(4);
    t4.factors[3] = Factor{Factor::POW, 4.0, 0.0};
    w4.add(t4);
  }
  const AnalyticMatrixField dd4 = i_ddbar(w4, 2);
  const auto rep4 =
      ot::weakly_parallel_check([&dd4](const RVec& x) { return dd4.eval(x); }, 2, pts);
  CHECK_FALSE(rep4.weakly_parallel);

  // pluriharmonic Re w^2: i ddbar vanishes identically, trivially parallel
  AnalyticScalar rew2(4);
  {
    Term t2;
    t2.factors = unit_factors(4);
    t2.factors[2] = Factor{Factor::POW, 2.0, 0.0};
    rew2.add(t2);
    Term t3;
    t3.coeff = -1.0;
    t3.factors = unit_factors(4);
    t3.factors[3] = Factor{Factor::POW, 2.0, 0.0};
    rew2.add(t3);
  }
  const AnalyticMatrixField ddr = i_ddbar(rew2, 2);
  const auto repr =
      ot::weakly_parallel_check([&ddr](const RVec& x) { return ddr.eval(x); }, 2, pts);
  CHECK(repr.weakly_parallel);
}

TEST_CASE("explicit family: residual at t = 0, moderate t, and late time") {
  std::mt19937_64 rng(23);
  const auto pts = ot::sample_points(2, rng, 30);
  for (const auto& p : pts) {
    CHECK(ot::explicit_solution_residual(2, 0.0, p) < 1e-8);
    CHECK(ot::explicit_solution_residual(2, 5.0, p) < 1e-7);
    CHECK(ot::explicit_solution_residual(2, 1000.0, p) < 1e-6);
  }
}

TEST_CASE("leaf stretching pullback factors") {
  std::mt19937_64 rng(29);
  const auto pts = ot::sample_points(2, rng, 50);
  for (double t : {0.0, 1.0, 7.0}) {
    const auto ra = ot::leaf_stretch_pullback(2, t, ot::ModelForm::alpha, pts);
    CHECK(ra.factor == 1.0);
    CHECK(ra.max_rel_error < 1e-10);
    const auto rb = ot::leaf_stretch_pullback(2, t, ot::ModelForm::beta, pts);
    CHECK(rb.factor == t + 1.0);
    CHECK(rb.max_rel_error < 1e-10);
    const auto rg = ot::leaf_stretch_pullback(2, t, ot::ModelForm::gamma, pts);
    CHECK(rg.factor == 1.0);
    CHECK(rg.max_rel_error < 1e-10);
  }
  CHECK(ot::leaf_stretch_pullback(2, 3.0, ot::ModelForm::beta, pts).factor ==
        doctest::Approx(4.0));
}

TEST_CASE("volume expansion against the brute-force wedge oracle") {
  std::mt19937_64 rng(31);
  for (int n : {2, 3}) {
    const auto pts = ot::sample_points(n, rng, 10);
    for (const auto& p : pts) {
      const auto rep = ot::expansion_coefficients(n, 2.0, p);
      CHECK(rep.mismatch < 1e-9);
      CHECK(rep.coefficients_nonneg);
      CHECK(rep.log_bound_holds);
      // f_{k-1} against the permutation wedge oracle
      const Mat g0 = ot::ot_metric(n).eval(p.coords);
      const Mat a = ot::alpha_form(n).eval(p.coords);
      const double om = ot::omega_density(n, p);
      for (int k = 2; k <= n; ++k) {
        std::vector<Mat> forms;
        for (int i = 0; i < k; ++i) forms.push_back(g0);
        for (int i = 0; i < n - k; ++i) forms.push_back(a);
        const double f_oracle = binomial(n, k) * wedge_density_oracle(forms) / (n * om);
        CHECK(rep.f[static_cast<size_t>(k - 2)] ==
              doctest::Approx(f_oracle).epsilon(1e-9));
      }
    }
  }
  // the model metric makes every f constant: n = 2 gives f_1 = 2
  const auto p = mp(2, {0.0, 1.0, 0.0, 0.0});
  const auto rep = ot::expansion_coefficients(2, 2.0, p);
  CHECK(rep.f.size() == 1);
  CHECK(rep.f[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("volume expansion limits and rejections") {
  const auto p = mp(2, {0.2, 1.3, -0.1, 0.4});
  const auto rep = ot::expansion_coefficients(2, 1e6, p);
  CHECK(std::abs(rep.lhs - 1.0) < 1e-5);
  CHECK_THROWS_AS(ot::expansion_coefficients(2, 0.5, p), PointError);
  // a degenerate base (alpha itself) is rejected by positivity
  const AnalyticMatrixField a = ot::alpha_form(2);
  CHECK_THROWS_AS(ot::expansion_coefficients(2, 2.0, p, &a), PointError);
}

TEST_CASE("normalization integral of the explicit family by quadrature") {
  std::mt19937_64 rng(37);
  const auto pts = ot::sample_points(2, rng, 400);
  for (double t : {1.0, 10.0, 100.0}) CHECK(ot::normalization_mismatch(2, t, pts) < 1e-6);
  CHECK_THROWS_AS(ot::normalization_mismatch(2, 0.0, pts), PointError);
}

TEST_CASE("collapse proxy: exact fiber scaling and base-block decay") {
  std::mt19937_64 rng(41);
  const auto pts = ot::sample_points(2, rng, 50);
  const auto p0 = ot::gh_collapse_proxy(2, 0.0, pts);
  // at t = 0 the fiber length is sqrt(beta entry) = sqrt(prod y)
  double expect = 0.0;
  for (const auto& p : pts) expect = std::max(expect, std::sqrt(p.y(0)));
  CHECK(p0.fiber == doctest::Approx(expect).epsilon(1e-12));

  const auto p99 = ot::gh_collapse_proxy(2, 99.0, pts);
  CHECK(p99.fiber == doctest::Approx(p0.fiber / 10.0).epsilon(1e-8));
  // base deviation is O(1/(t+1)): gamma/(t+1)
  const auto p9 = ot::gh_collapse_proxy(2, 9.0, pts);
  CHECK(p99.base_deviation == doctest::Approx(p9.base_deviation / 10.0).epsilon(1e-10));
}

TEST_CASE("reference family stays positive and solves the equation for a sweep") {
  std::mt19937_64 rng(43);
  const auto pts = ot::sample_points(2, rng, 10);
  for (double t : {0.0, 0.5, 3.0, 31.6, 1000.0}) {
    const AnalyticMatrixField hat = ot::omega_hat(2, t);
    for (const auto& p : pts) CHECK(min_eigenvalue(hat.eval(p.coords)) > 0.0);
  }
}
