#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "conteq/chern.hpp"
#include "conteq/fd_engine.hpp"

using namespace conteq;

namespace {

RVec point4(double a, double b, double c, double d) {
  RVec x(4);
  x << a, b, c, d;
  return x;
}

/// Kaehler metric from a potential: I + i ddbar psi, with exact derivatives.
AnalyticMatrixField potential_metric(int n, const AnalyticScalar& psi) {
  AnalyticMatrixField base(n, 2 * n);
  Term unit;
  unit.factors = unit_factors(2 * n);
  base.add_matrix_term(Mat::Identity(n, n), unit);
  return AnalyticMatrixField::sum(base, i_ddbar(psi, n));
}

}  // namespace

TEST_CASE("constant metric has vanishing connection and curvature") {
  Mat g0(2, 2);
  g0 << cplx{2.0, 0.0}, cplx{0.3, 0.1}, cplx{0.3, -0.1}, cplx{1.5, 0.0};
  AnalyticMatrixField f(2, 4);
  Term unit;
  unit.factors = unit_factors(4);
  f.add_matrix_term(g0, unit);
  ExactProvider p(f);
  const MetricJet jet = metric_jet(p, point4(0.1, 0.2, 0.3, 0.4), 2);
  ChernData cd = chern_data(jet);
  CHECK(cd.gamma.sup_norm() < 1e-12);
  CHECK(cd.torsion.sup_norm() < 1e-12);
  CHECK(cd.curv.sup_norm() < 1e-12);
  CHECK(std::abs(cd.scalar) < 1e-12);
}

TEST_CASE("n = 1 exponential metric: the connection is the log-derivative") {
  // g = e^u with u = 0.3 cos(x) cos(y); Gamma^1_11 = d_z u
  auto u = [](const RVec& x) { return 0.3 * std::cos(x[0]) * std::cos(x[1]); };
  FdProvider f(1, 2, [&](const RVec& x) { return Mat::Constant(1, 1, std::exp(u(x))); }, 6, 1e-3);
  const RVec x = (RVec(2) << 0.4, 1.3).finished();
  const MetricJet jet = metric_jet(f, x, 2);
  const ChernData cd = chern_connection(jet);
  const cplx expect =
      0.5 * cplx{-0.3 * std::sin(x[0]) * std::cos(x[1]), 0.3 * std::cos(x[0]) * std::sin(x[1])};
  CHECK(std::abs(cd.gamma(0, 0, 0) - expect) < 1e-10);
}

TEST_CASE("potential metrics are torsion-free and satisfy every identity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  for (int rep = 0; rep < 3; ++rep) {
    const AnalyticScalar psi = random_scalar(4, rng, 6, 0.4, 2);
    const AnalyticMatrixField g = potential_metric(2, psi);
    ExactProvider p(g);
    const RVec x = point4(u(rng), u(rng), u(rng), u(rng));
    const MetricJet jet = metric_jet(p, x, 3);
    ChernData cd = chern_data(jet);
    CHECK(cd.torsion.sup_norm() < 1e-11);
    CHECK(std::abs(cd.tau[0]) + std::abs(cd.tau[1]) < 1e-11);
    const auto sups = commutation_residuals_jet(jet).sups();
    for (double s : sups) CHECK(s < 1e-10);
    // engine route: residual budget is the differentiation error
    const auto fsups = commutation_residuals(p, x, 6, 1e-2).sups();
    for (double s : fsups) CHECK(s < 1e-6);
  }
}

TEST_CASE("jet-algebraic identity residuals vanish for any consistent jet") {
  // the five identities are algebraic in the jet; sup residuals sit at the
  // rounding floor even for coarse finite-difference jets
  std::mt19937_64 rng(57);
  const AnalyticMatrixField g = random_metric(2, rng, 0.1);
  FdProvider fd(2, 4, [&g](const RVec& q) { return g.eval(q); }, 2, 0.1);
  const auto sups = commutation_residuals_jet(metric_jet(fd, point4(1, 2, 3, 4), 3)).sups();
  for (double s : sups) CHECK(s < 1e-12);
}

TEST_CASE("antisymmetrization of a symmetric connection vanishes") {
  std::mt19937_64 rng(29);
  const AnalyticScalar psi = random_scalar(4, rng, 4, 0.3, 1);
  ExactProvider p(potential_metric(2, psi));
  const MetricJet jet = metric_jet(p, point4(1.0, 2.0, 3.0, 4.0), 2);
  ChernData cd = chern_connection(jet);
  for (int a = 0; a < 2; ++a)
    for (int j = 0; j < 2; ++j)
      for (int r = 0; r < 2; ++r)
        CHECK(std::abs(cd.gamma(a, j, r) - cd.gamma(a, r, j)) < 1e-11);
  fill_torsion(cd);
  CHECK(cd.torsion.sup_norm() < 1e-11);
}

TEST_CASE("first Ricci equals the log-determinant Laplacian") {
  std::mt19937_64 rng(7);
  const AnalyticMatrixField g = random_metric(2, rng, 0.15);
  ExactProvider p(g);
  const RVec x = point4(0.9, 1.7, 0.1, 5.0);
  const MetricJet jet = metric_jet(p, x, 2);
  ChernData cd = chern_data(jet);

  ScalarFdProvider ld(4, [&g](const RVec& q) { return std::log(g.eval(q).determinant().real()); },
                      6, 1e-2);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j) {
      const int dirs[2] = {j, k};
      const bool bars[2] = {false, true};
      const cplx expect = -complex_deriv_scalar(ld, x, dirs, bars);
      CHECK(std::abs(cd.ricci_first(k, j) - expect) < 1e-8);
    }
  CHECK(hermiticity_defect(cd.ricci_first) < 1e-9);
  CHECK(hermiticity_defect(cd.ricci_second) < 1e-9);
}

TEST_CASE("curvature matches the direct second-derivative route at doubled order") {
  std::mt19937_64 rng(13);
  const AnalyticMatrixField g = random_metric(2, rng, 0.15);
  FdProvider fd6(2, 4, [&g](const RVec& q) { return g.eval(q); }, 6, 1e-2);
  const RVec x = point4(2.2, 0.4, 1.9, 3.3);
  const MetricJet jet = metric_jet(fd6, x, 2);
  ChernData cd = chern_data(jet);

  // oracle: R_{kbar j lbar r} = -d_j d_kbar g_{lbar r}
  //         + g^{m qbar} d_j g_{qbar r} d_kbar g_{lbar m}, from an order-8 jet
  FdProvider fd8(2, 4, [&g](const RVec& q) { return g.eval(q); }, 8, 2e-2);
  const MetricJet j8 = metric_jet(fd8, x, 2);
  const Mat gi = j8.g.inverse();
  double rel = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j) {
      const Mat low = j8.d1b(k) * gi * j8.d1[static_cast<size_t>(j)] -
                      j8.d11[static_cast<size_t>(j)][static_cast<size_t>(k)];
      for (int l = 0; l < 2; ++l)
        for (int r = 0; r < 2; ++r)
          rel = std::max(rel, std::abs(cd.curv_low(k, j, l, r) - low(l, r)));
    }
  CHECK(rel / std::max(1.0, cd.curv_low.sup_norm()) < 1e-6);
}

TEST_CASE("commutation residuals on random non-Kaehler metrics at order 6") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  for (int rep = 0; rep < 5; ++rep) {
    const AnalyticMatrixField g = random_metric(2, rng, 0.1);
    const ExactProvider p(g);
    const RVec x = point4(u(rng), u(rng), u(rng), u(rng));
    const auto sups = commutation_residuals(p, x, 6, 1e-2).sups();
    for (double s : sups) CHECK(s < 1e-5);
  }
}

TEST_CASE("identity residuals shrink at the scheme order under step halving") {
  std::mt19937_64 rng(37);
  const AnalyticMatrixField g = random_metric(2, rng, 0.1);
  const ExactProvider p(g);
  const RVec x = point4(1.1, 2.8, 0.6, 4.0);
  auto sup_at = [&](double h) {
    const auto sups = commutation_residuals(p, x, 6, h).sups();
    double m = 0.0;
    for (double s : sups) m = std::max(m, s);
    return m;
  };
  const double c = sup_at(0.04), f = sup_at(0.02);
  CHECK(c / f >= std::pow(2.0, 5.5));
}

TEST_CASE("trace operation: self-trace, diagonal arithmetic, linearity, scaling") {
  Mat ref = Mat::Zero(2, 2);
  ref(0, 0) = 1.0;
  ref(1, 1) = 2.0;
  Mat form = Mat::Zero(2, 2);
  form(0, 0) = 3.0;
  form(1, 1) = 4.0;
  CHECK(trace_form(ref, ref) == doctest::Approx(2.0));
  CHECK(trace_form(ref, form) == doctest::Approx(5.0));

  std::mt19937_64 rng(41);
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat a(2, 2), b(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      a(i, j) = cplx{nd(rng), nd(rng)};
      b(i, j) = cplx{nd(rng), nd(rng)};
    }
  a = hermitize(a);
  b = hermitize(b);
  const Mat g = hermitize(Mat(a * a.adjoint())) + Mat::Identity(2, 2);
  CHECK(trace_form(g, Mat(2.0 * a + 3.0 * b)) ==
        doctest::Approx(2.0 * trace_form(g, a) + 3.0 * trace_form(g, b)).epsilon(1e-10));
  CHECK(trace_form(Mat(5.0 * g), a) == doctest::Approx(trace_form(g, a) / 5.0).epsilon(1e-10));
  CHECK_THROWS_AS(trace_form(g, Mat::Identity(3, 3)), PointError);
}
