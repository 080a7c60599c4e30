#include "conteq/torus_solver.hpp"

#include <cmath>
#include <numbers>

#include "conteq/linalg.hpp"

namespace conteq {

namespace {

double sup_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

double dot(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(ScalarField& y, double a, const ScalarField& x) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

TorusSolver::TorusSolver(const TorusGrid& grid, Variant variant, const ScalarField& phi0,
                         const Mat& g_ref, SolverConfig config)
    : grid_(grid),
      ops_(grid),
      variant_(variant),
      config_(std::move(config)),
      g_ref_(g_ref),
      phi0_(phi0) {
  const int n = grid_.n_complex;
  // omega_0 = g_ref + i ddbar phi0
  omega0_ = MatrixGridField::constant(grid_, g_ref_);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const ComplexField dd = ops_.ddbar(phi0_, a, b);
      auto& e = omega0_.entries[static_cast<size_t>(b) * n + a];  // entry (k=b, j=a) = d_a d_bbar phi
      for (size_t i = 0; i < e.size(); ++i) e[i] += dd[i];
    }
  ell0_.assign(grid_.size(), 0.0);
  const double ldref = std::log(g_ref_.determinant().real());
  for (size_t i = 0; i < grid_.size(); ++i) {
    const Mat m = omega0_.at(i);
    require_positive_definite(m, static_cast<long>(i));
    ell0_[i] = std::log(m.determinant().real()) - ldref;
  }
  u_ = phi0_;
  if (variant_ == Variant::unnormalized) u_.assign(grid_.size(), 0.0);
  accepted_u_ = u_;
}

ScalarField TorusSolver::sample(const TorusGrid& grid, const AnalyticScalar& f) {
  ScalarField out(grid.size());
  const double h = grid.spacing();
  RVec x = RVec::Zero(2 * grid.n_complex);
  for (int i0 = 0; i0 < grid.N; ++i0)
    for (int i1 = 0; i1 < grid.N; ++i1) {
      if (grid.re_slice) {
        x[0] = i0 * h;
        x[2] = i1 * h;
      } else {
        x[0] = i0 * h;
        x[1] = i1 * h;
      }
      out[grid.index(i0, i1)] = f.eval(x);
    }
  return out;
}

MatrixGridField TorusSolver::metric_from_unknown(const ScalarField& u, double t) const {
  const int n = grid_.n_complex;
  // Normalized: (t+1) omega = g_ref + i ddbar u; returns the positive part
  // whose determinant enters the scalar equation.
  // Unnormalized: omega = g_ref + i ddbar(phi0 + t ell0 + u).
  ScalarField pot = u;
  if (variant_ == Variant::unnormalized) {
    for (size_t i = 0; i < pot.size(); ++i) pot[i] += phi0_[i] + t * ell0_[i];
  }
  MatrixGridField g = MatrixGridField::constant(grid_, g_ref_);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const ComplexField dd = ops_.ddbar(pot, a, b);
      auto& e = g.entries[static_cast<size_t>(b) * n + a];
      for (size_t i = 0; i < e.size(); ++i) e[i] += dd[i];
    }
  return g;
}

double TorusSolver::min_metric_eigenvalue(const MatrixGridField& g) const {
  double m = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < grid_.size(); ++i) m = std::min(m, min_eigenvalue(hermitize(g.at(i))));
  return m;
}

ScalarField TorusSolver::residual(const ScalarField& u, double t) const {
  const MatrixGridField g = metric_from_unknown(u, t);
  const double ldref = std::log(g_ref_.determinant().real());
  ScalarField f(grid_.size());
  for (size_t i = 0; i < grid_.size(); ++i) {
    const double ld = std::log(g.at(i).determinant().real());
    if (variant_ == Variant::normalized) {
      f[i] = u[i] - phi0_[i] - t * (ld - ldref);
    } else {
      f[i] = t * (ld - ldref - ell0_[i]) - u[i];
    }
  }
  return f;
}

bool TorusSolver::solve_at(double t) {
  const int n = grid_.n_complex;
  t_ = t;
  newton_history_.clear();
  ScalarField u = u_;
  if (min_metric_eigenvalue(metric_from_unknown(u, t)) <= 0.0) {
    residual_norm_ = std::numeric_limits<double>::infinity();
    newton_iters_ = 0;
    return false;
  }

  ScalarField f = residual(u, t);
  double fn = sup_abs(f);
  newton_iters_ = 0;

  for (int iter = 0; iter < config_.max_newton && fn > config_.newton_tol; ++iter) {
    const MatrixGridField g = metric_from_unknown(u, t);
    // Pointwise inverse metric entries for the Jacobian apply.
    std::vector<Mat> ginv(grid_.size());
    Mat gmean = Mat::Zero(n, n);
    for (size_t i = 0; i < grid_.size(); ++i) {
      ginv[i] = g.at(i).inverse();
      gmean += ginv[i];
    }
    gmean /= static_cast<double>(grid_.size());

    // J delta = delta - t * ginv^{ab} d_a d_bbar delta  (sign arranged so the
    // Newton update is u <- u - delta for both variants).
    auto apply_j = [&](const ScalarField& d) {
      ScalarField out = d;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const ComplexField dd = ops_.ddbar(d, a, b);
          for (size_t i = 0; i < grid_.size(); ++i)
            out[i] -= t * (ginv[i](a, b) * dd[i]).real();
        }
      return out;
    };
    auto precond = [&](const ScalarField& r) { return ops_.solve_const_helmholtz(r, gmean, t); };

    // Right-hand side: solve J delta = f (normalized) or J delta = -(-f) --
    // for the unnormalized variant F = t log(...) - u has Jacobian (t Delta - 1),
    // i.e. -J, so the update direction flips sign.
    ScalarField rhs = f;
    if (variant_ == Variant::unnormalized)
      for (auto& v : rhs) v = -v;

    // Preconditioned BiCGStab on J.
    ScalarField x(grid_.size(), 0.0);
    {
      ScalarField r = rhs;  // r = rhs - J x, x = 0
      ScalarField r0 = r;
      double rho = 1.0, alpha = 1.0, w = 1.0;
      ScalarField v(grid_.size(), 0.0), p(grid_.size(), 0.0);
      const double rhs_norm = std::sqrt(dot(rhs, rhs));
      const double tol = std::max(1e-13 * rhs_norm, 1e-300);
      for (int k = 0; k < 200; ++k) {
        const double rho1 = dot(r0, r);
        if (std::abs(rho1) < 1e-300) break;
        if (k == 0) {
          p = r;
        } else {
          const double beta = (rho1 / rho) * (alpha / w);
          for (size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * (p[i] - w * v[i]);
        }
        rho = rho1;
        const ScalarField ph = precond(p);
        v = apply_j(ph);
        alpha = rho / dot(r0, v);
        ScalarField s = r;
        axpy(s, -alpha, v);
        if (std::sqrt(dot(s, s)) < tol) {
          axpy(x, alpha, ph);
          break;
        }
        const ScalarField sh = precond(s);
        const ScalarField tt = apply_j(sh);
        w = dot(tt, s) / dot(tt, tt);
        axpy(x, alpha, ph);
        axpy(x, w, sh);
        r = s;
        axpy(r, -w, tt);
        if (std::sqrt(dot(r, r)) < tol) break;
      }
    }

    // Damped update with the positivity line search.
    double lambda = 1.0;
    bool ok = false;
    ScalarField u_trial;
    for (int ls = 0; ls < config_.max_linesearch; ++ls) {
      u_trial = u;
      axpy(u_trial, -lambda, x);
      const MatrixGridField gt = metric_from_unknown(u_trial, t);
      if (min_metric_eigenvalue(gt) > 0.0) {
        const ScalarField ft = residual(u_trial, t);
        const double ftn = sup_abs(ft);
        if (ftn < fn || ftn < config_.newton_tol) {
          newton_history_.push_back(fn > 0 ? ftn / (fn * fn) : 0.0);
          u = u_trial;
          f = ft;
          fn = ftn;
          ok = true;
          break;
        }
      }
      lambda *= config_.damping;
    }
    ++newton_iters_;
    if (!ok) {
      residual_norm_ = fn;
      return false;
    }
  }
  u_ = u;
  residual_norm_ = fn;
  return fn <= config_.newton_tol;
}

void TorusSolver::accept() {
  accepted_t_ = t_;
  accepted_u_ = u_;
  accepted_res_ = residual_norm_;
  accepted_iters_ = newton_iters_;
}

void TorusSolver::rollback() {
  t_ = accepted_t_;
  u_ = accepted_u_;
  residual_norm_ = accepted_res_;
  newton_iters_ = accepted_iters_;
}

ScalarField TorusSolver::phi() const {
  ScalarField p = u_;
  if (variant_ == Variant::normalized)
    for (auto& v : p) v /= (t_ + 1.0);
  return p;
}

MatrixGridField TorusSolver::omega() const {
  MatrixGridField g = metric_from_unknown(u_, t_);
  if (variant_ == Variant::normalized) {
    const double s = 1.0 / (t_ + 1.0);
    for (auto& e : g.entries)
      for (auto& v : e) v *= s;
  }
  return g;
}

MatrixGridField TorusSolver::omega0() const { return omega0_; }

MatrixGridField TorusSolver::reference_metric() const {
  if (variant_ == Variant::normalized) {
    Mat m = g_ref_ / (t_ + 1.0);
    return MatrixGridField::constant(grid_, m);
  }
  return omega0_;
}

double TorusSolver::normalization_mismatch() const {
  if (variant_ != Variant::normalized || t_ <= 0.0)
    throw std::invalid_argument("normalization requires the normalized variant and t > 0");
  // integral e^{((t+1)phi - phi0)/t} Omega_ref  vs  (t+1)^n integral omega^n,
  // both as grid means against the flat measure.
  const double ldref = std::log(g_ref_.determinant().real());
  const MatrixGridField g = metric_from_unknown(u_, t_);  // (t+1) omega
  double lhs = 0.0, rhs = 0.0;
  for (size_t i = 0; i < grid_.size(); ++i) {
    lhs += std::exp((u_[i] - phi0_[i]) / t_);
    rhs += g.at(i).determinant().real() / std::exp(ldref);
  }
  return std::abs(lhs - rhs) / std::abs(rhs);
}

}  // namespace conteq
