#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conteq/fd_engine.hpp"
#include "conteq/grid.hpp"
#include "conteq/jet.hpp"

using namespace conteq;

TEST_CASE("Fornberg weights reproduce the classic central stencils") {
  const double nodes3[3] = {-1.0, 0.0, 1.0};
  const auto w1 = fd_weights(nodes3, 1);
  CHECK(w1[0] == doctest::Approx(-0.5));
  CHECK(w1[1] == doctest::Approx(0.0));
  CHECK(w1[2] == doctest::Approx(0.5));
  const auto w2 = fd_weights(nodes3, 2);
  CHECK(w2[0] == doctest::Approx(1.0));
  CHECK(w2[1] == doctest::Approx(-2.0));
  CHECK(w2[2] == doctest::Approx(1.0));
}

TEST_CASE("finite differences on a constant field vanish") {
  FdProvider f(2, 4, [](const RVec&) { return Mat::Identity(2, 2); }, 6, 1e-2);
  RVec x = RVec::Zero(4);
  const int dirs[1] = {0};
  const bool bars[1] = {false};
  CHECK(complex_deriv(f, x, dirs, bars).cwiseAbs().maxCoeff() < 1e-12);
  const int dirs2[2] = {0, 1};
  const bool bars2[2] = {false, true};
  CHECK(complex_deriv(f, x, dirs2, bars2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Wirtinger derivatives of a holomorphic monomial") {
  // entry = z^2 as a polynomial in (x, y); d_z z^2 = 2z, d_zbar z^2 = 0
  AnalyticMatrixField f(1, 2);
  Term t1;  // x^2
  t1.coeff = 1.0;
  t1.factors = {Factor{Factor::POW, 2.0, 0.0}, Factor{Factor::POW, 0.0, 0.0}};
  Term t2;  // -y^2
  t2.coeff = -1.0;
  t2.factors = {Factor{Factor::POW, 0.0, 0.0}, Factor{Factor::POW, 2.0, 0.0}};
  Term t3;  // 2i x y
  t3.coeff = cplx{0.0, 2.0};
  t3.factors = {Factor{Factor::POW, 1.0, 0.0}, Factor{Factor::POW, 1.0, 0.0}};
  f.add_term(0, 0, t1);
  f.add_term(0, 0, t2);
  f.add_term(0, 0, t3);
  ExactProvider p(f);
  RVec x(2);
  x << 0.7, -0.4;
  const cplx z{0.7, -0.4};
  const int dirs[1] = {0};
  const bool hol[1] = {false};
  const bool anti[1] = {true};
  CHECK(std::abs(complex_deriv(p, x, dirs, hol)(0, 0) - 2.0 * z) < 1e-12);
  CHECK(std::abs(complex_deriv(p, x, dirs, anti)(0, 0)) < 1e-12);
}

TEST_CASE("FD jets converge to exact jets at the scheme order") {
  std::mt19937_64 rng(3);
  const AnalyticMatrixField g = random_metric(2, rng, 0.2);
  ExactProvider exact(g);
  RVec x(4);
  x << 0.3, 1.1, 2.0, 0.5;
  const MetricJet je = metric_jet(exact, x, 3);

  auto sup_diff = [&](double h) {
    FdProvider fd(2, 4, [&g](const RVec& p) { return g.eval(p); }, 4, h);
    const MetricJet jf = metric_jet(fd, x, 3);
    double m = 0.0;
    for (int a = 0; a < 2; ++a) m = std::max(m, (jf.d1[a] - je.d1[a]).cwiseAbs().maxCoeff());
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        m = std::max(m, (jf.d11[a][b] - je.d11[a][b]).cwiseAbs().maxCoeff());
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          m = std::max(m, (jf.d21[a][b][c] - je.d21[a][b][c]).cwiseAbs().maxCoeff());
    return m;
  };
  const double e1 = sup_diff(0.08);
  const double e2 = sup_diff(0.04);
  CHECK(e2 < 1e-5);
  CHECK(e1 / e2 > 11.0);  // order-4 scheme: expect ~16
}

TEST_CASE("spectral derivative is exact on a single Fourier mode") {
  TorusGrid grid;
  grid.n_complex = 1;
  grid.N = 32;
  SpectralOps ops(grid);
  ComplexField f(grid.size());
  for (int i0 = 0; i0 < grid.N; ++i0)
    for (int i1 = 0; i1 < grid.N; ++i1)
      f[grid.index(i0, i1)] = std::cos(3.0 * i0 * grid.spacing()) * std::sin(2.0 * i1 * grid.spacing());
  const ComplexField dx = ops.axis_deriv(f, 0, 1);
  const ComplexField dy = ops.axis_deriv(f, 1, 1);
  double sup = 0.0;
  for (int i0 = 0; i0 < grid.N; ++i0)
    for (int i1 = 0; i1 < grid.N; ++i1) {
      const double x0 = i0 * grid.spacing(), x1 = i1 * grid.spacing();
      sup = std::max(sup, std::abs(dx[grid.index(i0, i1)] -
                                   cplx{-3.0 * std::sin(3.0 * x0) * std::sin(2.0 * x1), 0.0}));
      sup = std::max(sup, std::abs(dy[grid.index(i0, i1)] -
                                   cplx{2.0 * std::cos(3.0 * x0) * std::cos(2.0 * x1), 0.0}));
    }
  CHECK(sup < 1e-10);
}

TEST_CASE("spectral derivative of a constant grid vanishes") {
  TorusGrid grid;
  grid.n_complex = 1;
  grid.N = 16;
  SpectralOps ops(grid);
  ComplexField f(grid.size(), cplx{2.5, -0.5});
  CHECK(std::abs(ops.axis_deriv(f, 0, 1)[5]) < 1e-12);
  ScalarField s(grid.size(), 4.0);
  const auto ds = ops.axis_deriv(s, 1, 2);
  double sup = 0.0;
  for (double v : ds) sup = std::max(sup, std::abs(v));
  CHECK(sup < 1e-12);
}

TEST_CASE("trace scalar jet matches direct differentiation") {
  std::mt19937_64 rng(17);
  const AnalyticMatrixField chi = random_metric(2, rng, 0.15);
  const AnalyticMatrixField om = random_metric(2, rng, 0.15);
  ExactProvider pc(chi), po(om);
  RVec x(4);
  x << 1.0, 0.2, -0.7, 2.2;
  const ScalarJet tj = trace_scalar_jet(metric_jet(pc, x, 2), metric_jet(po, x, 2));

  ScalarFdProvider tr(
      4, [&](const RVec& p) { return (chi.eval(p).inverse() * om.eval(p)).trace().real(); }, 6,
      1e-2);
  const ScalarJet td = scalar_jet(tr, x);
  CHECK(std::abs(tj.v - td.v) < 1e-12);
  for (int a = 0; a < 2; ++a) CHECK(std::abs(tj.d1[a] - td.d1[a]) < 1e-8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(std::abs(tj.d11(a, b) - td.d11(a, b)) < 1e-7);
}
