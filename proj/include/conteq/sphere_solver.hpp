#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "conteq/continuity.hpp"

namespace conteq {

/// Rotationally symmetric metrics on the Riemann sphere, reduced to momentum
/// coordinates. A metric is g_{1bar 1} = u''(s)/|z|^2 with s = log|z|^2 and
/// u''(s) = H(tau), tau = u'(s) in (0, tau_max); the profile H is smooth with
/// H(0) = H(tau_max) = 0, H'(0) = 1, H'(tau_max) = -1 (pole regularity).
/// The grid is cell-centered and uniform in x = tau / tau_max; d/ds acts as
/// (H/tau_max) d/dx. The profile must be evaluable slightly beyond
/// [0, tau_max] (polynomial profiles are).
struct SphereProfile {
  double tau_max = 2.0;
  std::function<double(double)> H;  // on [0, tau_max]

  /// Round profile of area 2 pi tau_max with Ric(omega_0) = (2/tau_max) omega_0.
  static SphereProfile round(double tau_max = 2.0);
  /// Round profile times (1 + eps tau (tau_max - tau) / tau_max^2); pole
  /// slopes and total area are preserved.
  static SphereProfile perturbed(double tau_max, double eps);
};

class SphereSolver : public ContinuationBackend {
 public:
  SphereSolver(const SphereProfile& profile, Variant variant, int n_cells, SolverConfig config);

  bool solve_at(double t) override;
  void accept() override;
  void rollback() override;

  double t() const { return t_; }
  double residual_norm() const { return residual_norm_; }
  int newton_iters() const { return newton_iters_; }
  int cells() const { return n_; }

  /// Density numerators against the |z|^{-2} ds-measure at cell centers.
  const std::vector<double>& density() const { return a_; }      // solution slide
  const std::vector<double>& density0() const { return u0pp_; }  // omega_0
  std::vector<double> reference_density() const;                 // omega_0 - t Ric omega_0
  const std::vector<double>& potential() const { return psi_; }

  /// Scalar curvature of the solution at cell centers, computed through an
  /// order-4 discretization independent of the Newton operator.
  std::vector<double> scalar_curvature() const;
  std::vector<double> trace_of_initial() const;
  /// Calabi quantity of the t-slid solution against the initial metric.
  std::vector<double> calabi() const;

  /// Quadrature of the total area and the total Chern-Ricci mass; their ratio
  /// is the cohomological maximal time of the unnormalized equation.
  double area() const;
  double ricci_mass() const;
  double maximal_time() const { return area() / ricci_mass(); }

 private:
  std::vector<double> residual(const std::vector<double>& psi, double t) const;
  std::vector<double> density_from(const std::vector<double>& psi, double t) const;
  Eigen::MatrixXd dds_matrix(int order) const;

  SphereProfile profile_;
  Variant variant_;
  SolverConfig config_;
  int n_;
  double dx_;
  std::vector<double> x_;     // cell centers
  std::vector<double> u0pp_;  // H(tau) at centers
  std::vector<double> ric0_;  // (log u0'')''(s) = H H''(tau), analytic route
  Eigen::MatrixXd d2s6_;      // order-6 d^2/ds^2 (equation operator)
  Eigen::MatrixXd d2s4_;      // order-4 d^2/ds^2 (diagnostics operator)
  Eigen::MatrixXd dds4_;      // order-4 d/ds (diagnostics)

  double t_ = 0.0;
  std::vector<double> psi_;
  std::vector<double> a_;
  double residual_norm_ = 0.0;
  int newton_iters_ = 0;

  double acc_t_ = 0.0;
  std::vector<double> acc_psi_;
  double acc_res_ = 0.0;
  int acc_iters_ = 0;
};

}  // namespace conteq
