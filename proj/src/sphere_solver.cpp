#include "conteq/sphere_solver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>

#include "conteq/fd_engine.hpp"

namespace conteq {

SphereProfile SphereProfile::round(double tau_max) {
  SphereProfile p;
  p.tau_max = tau_max;
  p.H = [tau_max](double tau) { return tau * (tau_max - tau) / tau_max; };
  return p;
}

SphereProfile SphereProfile::perturbed(double tau_max, double eps) {
  SphereProfile p;
  p.tau_max = tau_max;
  p.H = [tau_max, eps](double tau) {
    const double base = tau * (tau_max - tau) / tau_max;
    return base * (1.0 + eps * tau * (tau_max - tau) / (tau_max * tau_max));
  };
  return p;
}

SphereSolver::SphereSolver(const SphereProfile& profile, Variant variant, int n_cells,
                           SolverConfig config)
    : profile_(profile), variant_(variant), config_(std::move(config)), n_(n_cells), dx_(1.0 / n_cells) {
  x_.resize(static_cast<size_t>(n_));
  u0pp_.resize(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    x_[static_cast<size_t>(i)] = (i + 0.5) * dx_;
    u0pp_[static_cast<size_t>(i)] = profile_.H(profile_.tau_max * x_[static_cast<size_t>(i)]);
    if (!(u0pp_[static_cast<size_t>(i)] > 0.0))
      throw std::invalid_argument("sphere profile must be positive on the open interval");
  }

  // (log u0'')''(s) = H(tau) H''(tau): H'' by an order-6 difference of the
  // profile closure (exact for polynomial profiles).
  ric0_.resize(static_cast<size_t>(n_));
  {
    const double h = 1e-2 * profile_.tau_max;
    const double nodes[7] = {-3 * h, -2 * h, -h, 0.0, h, 2 * h, 3 * h};
    const auto w = fd_weights(nodes, 2);
    for (int i = 0; i < n_; ++i) {
      const double tau = profile_.tau_max * x_[static_cast<size_t>(i)];
      double hpp = 0.0;
      for (int k = 0; k < 7; ++k) hpp += w[static_cast<size_t>(k)] * profile_.H(tau + nodes[k]);
      ric0_[static_cast<size_t>(i)] = u0pp_[static_cast<size_t>(i)] * hpp;
    }
  }

  const Eigen::MatrixXd dds6 = dds_matrix(6);
  dds4_ = dds_matrix(4);
  d2s6_ = dds6 * dds6;
  d2s4_ = dds4_ * dds4_;

  psi_.assign(static_cast<size_t>(n_), 0.0);
  acc_psi_ = psi_;
  a_ = u0pp_;
}

Eigen::MatrixXd SphereSolver::dds_matrix(int order) const {
  // d/ds = (H/tau_max) d/dx at cell centers; one-sided stencils at the ends.
  const int w = order + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    const int lo = std::max(0, std::min(i - order / 2, n_ - w));
    std::vector<double> nodes(static_cast<size_t>(w));
    for (int k = 0; k < w; ++k) nodes[static_cast<size_t>(k)] = (lo + k - i) * dx_;
    const auto ws = fd_weights(nodes, 1);
    const double hc = u0pp_[static_cast<size_t>(i)] / profile_.tau_max;
    for (int k = 0; k < w; ++k) m(i, lo + k) = hc * ws[static_cast<size_t>(k)];
  }
  return m;
}

std::vector<double> SphereSolver::density_from(const std::vector<double>& psi, double t) const {
  Eigen::Map<const Eigen::VectorXd> p(psi.data(), n_);
  const Eigen::VectorXd dd = d2s6_ * p;
  std::vector<double> b(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i)
    b[static_cast<size_t>(i)] = u0pp_[static_cast<size_t>(i)] + t * ric0_[static_cast<size_t>(i)] + dd[i];
  return b;
}

std::vector<double> SphereSolver::residual(const std::vector<double>& psi, double t) const {
  const std::vector<double> b = density_from(psi, t);
  std::vector<double> f(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    const double lr = std::log(b[static_cast<size_t>(i)] / u0pp_[static_cast<size_t>(i)]);
    f[static_cast<size_t>(i)] = variant_ == Variant::unnormalized
                                    ? t * lr - psi[static_cast<size_t>(i)]
                                    : psi[static_cast<size_t>(i)] - t * lr;
  }
  return f;
}

bool SphereSolver::solve_at(double t) {
  t_ = t;
  std::vector<double> psi = psi_;
  {
    const std::vector<double> b = density_from(psi, t);
    for (double v : b)
      if (!(v > 0.0)) {
        residual_norm_ = std::numeric_limits<double>::infinity();
        newton_iters_ = 0;
        return false;
      }
  }
  auto supnorm = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  std::vector<double> f = residual(psi, t);
  double fn = supnorm(f);
  newton_iters_ = 0;

  for (int iter = 0; iter < config_.max_newton && fn > config_.newton_tol; ++iter) {
    const std::vector<double> b = density_from(psi, t);
    // J = I - t diag(1/b) D; the unnormalized residual carries the opposite
    // sign, handled through the right-hand side.
    Eigen::MatrixXd J = -d2s6_;
    for (int i = 0; i < n_; ++i) J.row(i) *= t / b[static_cast<size_t>(i)];
    J += Eigen::MatrixXd::Identity(n_, n_);
    Eigen::VectorXd rhs(n_);
    for (int i = 0; i < n_; ++i)
      rhs[i] = variant_ == Variant::unnormalized ? -f[static_cast<size_t>(i)] : f[static_cast<size_t>(i)];
    const Eigen::VectorXd delta = J.partialPivLu().solve(rhs);

    double lambda = 1.0;
    bool ok = false;
    for (int ls = 0; ls < config_.max_linesearch; ++ls) {
      std::vector<double> trial = psi;
      for (int i = 0; i < n_; ++i) trial[static_cast<size_t>(i)] -= lambda * delta[i];
      const std::vector<double> bt = density_from(trial, t);
      bool pos = true;
      for (double v : bt)
        if (!(v > 0.0)) {
          pos = false;
          break;
        }
      if (pos) {
        const std::vector<double> ft = residual(trial, t);
        const double ftn = supnorm(ft);
        if (ftn < fn || ftn < config_.newton_tol) {
          psi = trial;
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
  psi_ = psi;
  a_ = density_from(psi, t);
  residual_norm_ = fn;
  return fn <= config_.newton_tol;
}

void SphereSolver::accept() {
  acc_t_ = t_;
  acc_psi_ = psi_;
  acc_res_ = residual_norm_;
  acc_iters_ = newton_iters_;
}

void SphereSolver::rollback() {
  t_ = acc_t_;
  psi_ = acc_psi_;
  residual_norm_ = acc_res_;
  newton_iters_ = acc_iters_;
  a_ = density_from(psi_, t_);
}

std::vector<double> SphereSolver::reference_density() const {
  std::vector<double> r(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i)
    r[static_cast<size_t>(i)] = u0pp_[static_cast<size_t>(i)] + t_ * ric0_[static_cast<size_t>(i)];
  return r;
}

std::vector<double> SphereSolver::scalar_curvature() const {
  // log a = log u0'' + rho with rho smooth on the sphere; the background part
  // is the analytic ric0_ and rho is differentiated at order 4, a route
  // independent of the order-6 Newton operator.
  Eigen::VectorXd rho(n_);
  for (int i = 0; i < n_; ++i)
    rho[i] = std::log(a_[static_cast<size_t>(i)] / u0pp_[static_cast<size_t>(i)]);
  const Eigen::VectorXd d2rho = d2s4_ * rho;
  const double scale = variant_ == Variant::normalized ? (t_ + 1.0) : 1.0;
  std::vector<double> r(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i)
    r[static_cast<size_t>(i)] = -scale * (ric0_[static_cast<size_t>(i)] + d2rho[i]) / a_[static_cast<size_t>(i)];
  return r;
}

std::vector<double> SphereSolver::trace_of_initial() const {
  const double scale = variant_ == Variant::normalized ? (t_ + 1.0) : 1.0;
  std::vector<double> r(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i)
    r[static_cast<size_t>(i)] = scale * u0pp_[static_cast<size_t>(i)] / a_[static_cast<size_t>(i)];
  return r;
}

std::vector<double> SphereSolver::calabi() const {
  Eigen::VectorXd rho(n_);
  for (int i = 0; i < n_; ++i)
    rho[i] = std::log(a_[static_cast<size_t>(i)] / u0pp_[static_cast<size_t>(i)]);
  const Eigen::VectorXd drho = dds4_ * rho;
  std::vector<double> r(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i)
    r[static_cast<size_t>(i)] = drho[i] * drho[i] / a_[static_cast<size_t>(i)];
  return r;
}

double SphereSolver::area() const {
  // the density against ds integrates to tau_max dx per cell exactly
  return 2.0 * std::numbers::pi * profile_.tau_max;
}

double SphereSolver::ricci_mass() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double ds = profile_.tau_max * dx_ / u0pp_[static_cast<size_t>(i)];
    s += -ric0_[static_cast<size_t>(i)] * ds;
  }
  return 2.0 * std::numbers::pi * s;
}

}  // namespace conteq
