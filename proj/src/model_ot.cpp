#include "conteq/model_ot.hpp"

#include <cmath>

#include "conteq/jet.hpp"
#include "conteq/linalg.hpp"

namespace conteq {
namespace ot {

namespace {

Term monomial(int rdim, cplx coeff, std::initializer_list<std::pair<int, double>> powers) {
  Term t;
  t.coeff = coeff;
  t.factors = unit_factors(rdim);
  // exponents on a repeated dimension accumulate (the gamma diagonal needs y^-2)
  for (const auto& [dim, e] : powers) t.factors[static_cast<size_t>(dim)].k_or_e += e;
  return t;
}

}  // namespace

void require_valid(const ModelPoint& p) {
  if (!p.valid()) throw PointError("model point outside the upper half-space", -1, 0.0);
}

AnalyticMatrixField alpha_form(int n) {
  const int rdim = 2 * n;
  AnalyticMatrixField f(n, rdim);
  for (int j = 0; j + 1 < n; ++j)
    f.add_term(j, j, monomial(rdim, 0.25, {{2 * j + 1, -2.0}}));
  return f;
}

AnalyticMatrixField beta_form(int n) {
  const int rdim = 2 * n;
  AnalyticMatrixField f(n, rdim);
  Term t;
  t.coeff = 1.0;
  t.factors = unit_factors(rdim);
  for (int j = 0; j + 1 < n; ++j) t.factors[static_cast<size_t>(2 * j + 1)] = Factor{Factor::POW, 1.0, 0.0};
  f.add_term(n - 1, n - 1, std::move(t));
  return f;
}

AnalyticMatrixField gamma_form(int n) {
  const int rdim = 2 * n;
  AnalyticMatrixField f(n, rdim);
  for (int j = 0; j + 1 < n; ++j)
    for (int k = 0; k + 1 < n; ++k)
      f.add_term(k, j, monomial(rdim, 0.25, {{2 * j + 1, -1.0}, {2 * k + 1, -1.0}}));
  return f;
}

AnalyticMatrixField ot_metric(int n) {
  return AnalyticMatrixField::sum(AnalyticMatrixField::sum(alpha_form(n), beta_form(n)),
                                  gamma_form(n));
}

AnalyticMatrixField omega_hat(int n, double t) { return omega_hat(ot_metric(n), n, t); }

AnalyticMatrixField omega_hat(const AnalyticMatrixField& base, int n, double t) {
  return AnalyticMatrixField::sum(base.scaled(1.0 / (t + 1.0)),
                                  alpha_form(n).scaled(t / (t + 1.0)));
}

double omega_density(int n, const ModelPoint& p) {
  double ys = 1.0;
  for (int j = 0; j + 1 < n; ++j) ys *= p.y(j);
  return factorial(n - 1) / (std::pow(4.0, n - 1) * ys);
}

AnalyticScalar log_omega_density(int n) {
  const int rdim = 2 * n;
  AnalyticScalar s(rdim);
  Term c;
  c.coeff = std::log(factorial(n - 1)) - (n - 1) * std::log(4.0);
  c.factors = unit_factors(rdim);
  s.add(std::move(c));
  for (int j = 0; j + 1 < n; ++j) {
    Term l;
    l.coeff = -1.0;
    l.factors = unit_factors(rdim);
    l.factors[static_cast<size_t>(2 * j + 1)] = Factor{Factor::LOG, 0.0, 0.0};
    s.add(std::move(l));
  }
  return s;
}

std::vector<ModelPoint> sample_points(int n, std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> ybox(0.5, 2.0), xbox(-1.0, 1.0);
  std::vector<ModelPoint> pts;
  pts.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    ModelPoint p;
    p.n = n;
    p.coords = RVec::Zero(2 * n);
    for (int j = 0; j + 1 < n; ++j) {
      p.coords[2 * j] = xbox(rng);
      p.coords[2 * j + 1] = ybox(rng);
    }
    p.coords[2 * n - 2] = xbox(rng);
    p.coords[2 * n - 1] = xbox(rng);
    pts.push_back(std::move(p));
  }
  return pts;
}

namespace {

/// Per-axis FD steps shrunk near the half-space boundary.
std::vector<double> scaled_steps(int n, const ModelPoint& p, double h) {
  std::vector<double> steps(static_cast<size_t>(2 * n), h);
  for (int j = 0; j + 1 < n; ++j) {
    const double s = h * std::min(1.0, 0.5 * p.y(j));
    steps[static_cast<size_t>(2 * j)] = s;
    steps[static_cast<size_t>(2 * j + 1)] = s;
  }
  return steps;
}

}  // namespace

double ddbar_log_omega_residual(int n, const ModelPoint& p, int fd_order, double fd_step) {
  if (n < 2) throw PointError("the model volume form needs n >= 2", -1, 0.0);
  require_valid(p);
  const AnalyticScalar lo = log_omega_density(n);
  ScalarFdProvider f(2 * n, [lo](const RVec& x) { return lo.eval(x); }, fd_order, fd_step);
  {
    std::vector<double> steps = scaled_steps(n, p, fd_step);
    f.set_steps(steps);
  }
  const Mat a = alpha_form(n).eval(p.coords);
  double sup = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      const int dirs[2] = {j, k};
      const bool bars[2] = {false, true};
      const cplx d = complex_deriv_scalar(f, p.coords, dirs, bars);
      sup = std::max(sup, std::abs(d - a(k, j)));
    }
  return sup;
}

FlatnessReport strongly_flat_check(const MatrixFn& candidate, int n,
                                   const std::vector<ModelPoint>& samples, double tol) {
  FlatnessReport rep;
  std::vector<double> ratios;
  ratios.reserve(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    const ModelPoint& p = samples[i];
    require_valid(p);
    const Mat g = candidate(p.coords);
    require_positive_definite(hermitize(g), static_cast<long>(i));
    double ys = 1.0;
    for (int j = 0; j + 1 < n; ++j) ys *= p.y(j);
    ratios.push_back(g(n - 1, n - 1).real() / ys);
  }
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  rep.c = mean;
  for (double r : ratios)
    rep.relative_spread = std::max(rep.relative_spread, std::abs(r / mean - 1.0));
  rep.strongly_flat = rep.relative_spread < tol;
  return rep;
}

MatrixFn conformal_normalize(const MatrixFn& candidate, int n,
                             const std::vector<ModelPoint>& probe, std::optional<double> c) {
  double target;
  if (c.has_value()) {
    target = *c;
  } else {
    const FlatnessReport rep = strongly_flat_check(candidate, n, probe, 1e300);
    target = rep.c;
  }
  return [candidate, n, target](const RVec& x) -> Mat {
    double ys = 1.0;
    for (int j = 0; j + 1 < n; ++j) ys *= x[2 * j + 1];
    Mat g = candidate(x);
    const double www = g(n - 1, n - 1).real();
    if (!(www > 0.0))
      throw PointError("conformal normalization: leaf component vanished", -1, www);
    return (target * ys / www) * g;
  };
}

ParallelReport weakly_parallel_check(const MatrixFn& theta, int n,
                                     const std::vector<ModelPoint>& samples, int fd_order,
                                     double fd_step, double tol) {
  ParallelReport rep;
  ScalarFdProvider re(2 * n, [&theta, n](const RVec& x) { return theta(x)(n - 1, n - 1).real(); },
                      fd_order, fd_step);
  ScalarFdProvider im(2 * n, [&theta, n](const RVec& x) { return theta(x)(n - 1, n - 1).imag(); },
                      fd_order, fd_step);
  for (const ModelPoint& p : samples) {
    require_valid(p);
    const int dirs[1] = {n - 1};
    const bool bars[1] = {false};
    const cplx dw = complex_deriv_scalar(re, p.coords, dirs, bars) +
                    cplx{0.0, 1.0} * complex_deriv_scalar(im, p.coords, dirs, bars);
    rep.sup_dw = std::max(rep.sup_dw, std::abs(dw));
  }
  rep.weakly_parallel = rep.sup_dw < tol;
  return rep;
}

double explicit_solution_residual(int n, double t, const ModelPoint& p, int fd_order,
                                  double fd_step) {
  require_valid(p);
  if (t < 0.0) throw PointError("explicit family needs t >= 0", -1, t);
  const AnalyticMatrixField hat = omega_hat(n, t);
  FdProvider prov(n, 2 * n, [hat](const RVec& x) { return hat.eval(x); }, fd_order, fd_step);
  prov.set_steps(scaled_steps(n, p, fd_step));
  const MetricJet jet = metric_jet(prov, p.coords, 2);
  ChernData cd = chern_connection(jet);
  fill_curvature(cd, jet);
  const Mat lhs = (t + 1.0) * hat.eval(p.coords) - ot_metric(n).eval(p.coords) + t * cd.ricci_first;
  return lhs.cwiseAbs().maxCoeff();
}

StretchReport leaf_stretch_pullback(int n, double t, ModelForm form,
                                    const std::vector<ModelPoint>& samples) {
  StretchReport rep;
  rep.factor = form == ModelForm::beta ? t + 1.0 : 1.0;
  AnalyticMatrixField f = form == ModelForm::alpha ? alpha_form(n)
                          : form == ModelForm::beta ? beta_form(n)
                                                    : gamma_form(n);
  const double s = std::sqrt(t + 1.0);
  for (const ModelPoint& p : samples) {
    require_valid(p);
    RVec mapped = p.coords;
    mapped[2 * n - 2] *= s;
    mapped[2 * n - 1] *= s;
    Mat pulled = f.eval(mapped);
    // frame transform of the stretching map: diag(1, ..., 1, s)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        const double dk = k == n - 1 ? s : 1.0;
        const double dj = j == n - 1 ? s : 1.0;
        pulled(k, j) *= dk * dj;
      }
    const Mat base = f.eval(p.coords);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        const double denom = std::abs(base(k, j));
        if (denom < 1e-14) continue;
        rep.max_rel_error =
            std::max(rep.max_rel_error, std::abs(pulled(k, j) - rep.factor * base(k, j)) / denom);
      }
  }
  return rep;
}

ExpansionReport expansion_coefficients(int n, double t, const ModelPoint& p,
                                       const AnalyticMatrixField* base, double c) {
  require_valid(p);
  if (t < 1.0) throw PointError("volume expansion derived for t >= 1", -1, t);
  const AnalyticMatrixField b = base ? *base : ot_metric(n);
  const Mat g0 = b.eval(p.coords);
  require_positive_definite(hermitize(g0), -1);
  const Mat a = alpha_form(n).eval(p.coords);
  const double om = omega_density(n, p);

  ExpansionReport rep;
  const Mat hat = (g0 + t * a) / (t + 1.0);
  rep.lhs = std::pow(t + 1.0, n) * top_wedge_density(hat) / (c * n * std::pow(t, n - 1) * om);

  // f_{k-1} = C(n,k) g0^k ^ alpha^{n-k} / (c n Omega); the k = 1 term equals 1
  // exactly when g0 is strongly flat with constant c.
  double rhs = 0.0;
  double fsum = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double f = binomial(n, k) * mixed_wedge_density(g0, a, k) / (c * n * om);
    if (k == 1) {
      rhs += f;  // should be 1
    } else {
      rep.f.push_back(f);
      rhs += f / std::pow(t, k - 1);
      fsum += f;
      if (f < -1e-12) rep.coefficients_nonneg = false;
    }
  }
  rep.rhs = rhs;
  rep.mismatch = std::abs(rep.lhs - rep.rhs);
  rep.log_bound_holds = t * std::log(rep.lhs) <= fsum + 1e-9 && std::log(rep.lhs) >= -1e-9;
  return rep;
}

double explicit_family_potential(int n, double t, const ModelPoint& p, double phi0) {
  if (t <= 0.0) return phi0;
  const AnalyticMatrixField hat = omega_hat(n, t);
  const Mat g = hat.eval(p.coords);
  const double om = omega_density(n, p);
  const double arg = std::pow(t + 1.0, n) * top_wedge_density(g) / (n * std::pow(t, n - 1) * om);
  return (phi0 + t * std::log(arg)) / (t + 1.0);
}

double normalization_mismatch(int n, double t, const std::vector<ModelPoint>& quad_points) {
  if (t <= 0.0) throw PointError("normalization constant needs t > 0", -1, t);
  // LHS integral of e^{((t+1)phi - phi0)/t} Omega vs
  // RHS (t+1)^n / (n t^{n-1}) integral omega_hat^n, with c = 1 for the model
  // metric; equal-weight quadrature over the sample box.
  double lhs = 0.0, rhs = 0.0;
  for (const ModelPoint& p : quad_points) {
    const double phi = explicit_family_potential(n, t, p);
    lhs += std::exp(((t + 1.0) * phi) / t) * omega_density(n, p);
    const Mat g = omega_hat(n, t).eval(p.coords);
    rhs += std::pow(t + 1.0, n) / (n * std::pow(t, n - 1)) * top_wedge_density(g);
  }
  return std::abs(lhs - rhs) / std::abs(rhs);
}

CollapseProxy gh_collapse_proxy(int n, double t, const std::vector<ModelPoint>& samples) {
  CollapseProxy proxy;
  const AnalyticMatrixField hat = omega_hat(n, t);
  const AnalyticMatrixField a = alpha_form(n);
  for (const ModelPoint& p : samples) {
    const Mat g = hat.eval(p.coords);
    const Mat al = a.eval(p.coords);
    proxy.fiber = std::max(proxy.fiber, std::sqrt(g(n - 1, n - 1).real()));
    double dev = 0.0;
    for (int k = 0; k + 1 < n; ++k)
      for (int j = 0; j + 1 < n; ++j) dev = std::max(dev, std::abs(g(k, j) - al(k, j)));
    proxy.base_deviation = std::max(proxy.base_deviation, dev);
  }
  return proxy;
}

}  // namespace ot
}  // namespace conteq
