#pragma once

#include <functional>
#include <optional>

#include "conteq/analytic_field.hpp"
#include "conteq/continuity.hpp"
#include "conteq/grid.hpp"

namespace conteq {

/// Scalar-equation backend for flat tori. The unknown is the rescaled
/// potential u = (t+1) phi for the normalized variant and phi itself for the
/// unnormalized one; both Newton systems share the operator shape
/// (1 - t Delta) with the Laplacian of the current metric.
class TorusSolver {
 public:
  TorusSolver(const TorusGrid& grid, Variant variant, const ScalarField& phi0,
              const Mat& g_ref, SolverConfig config);

  /// phi0 sampled from an analytic expression.
  static ScalarField sample(const TorusGrid& grid, const AnalyticScalar& f);

  const TorusGrid& grid() const { return grid_; }
  Variant variant() const { return variant_; }
  const SolverConfig& config() const { return config_; }

  /// Newton-solve at parameter t starting from the last accepted state.
  /// Returns false when Newton or the positivity line search fails.
  bool solve_at(double t);
  void accept();
  void rollback();

  double t() const { return t_; }
  double residual_norm() const { return residual_norm_; }
  int newton_iters() const { return newton_iters_; }
  /// Residual ratios |F_{k+1}|/|F_k|^2 of the last solve (convergence table).
  const std::vector<double>& newton_history() const { return newton_history_; }

  /// Potential phi of the variant's ansatz omega = reference(t) + i ddbar phi.
  ScalarField phi() const;
  /// (t+1) phi for the normalized variant, phi itself otherwise.
  const ScalarField& unknown() const { return u_; }
  const ScalarField& phi0() const { return phi0_; }

  /// Solution metric omega(t) as a grid field.
  MatrixGridField omega() const;
  /// Initial metric omega_0 = g_ref + i ddbar phi0.
  MatrixGridField omega0() const;
  /// Comparison reference: omega_ref / (t+1) (normalized) or omega_0.
  MatrixGridField reference_metric() const;
  const Mat& g_ref() const { return g_ref_; }

  const SpectralOps& ops() const { return ops_; }

  /// Relative mismatch of the integral normalization at the current state
  /// (normalized variant, t > 0 only).
  double normalization_mismatch() const;

  /// Pointwise scalar-equation residual for an arbitrary unknown field.
  ScalarField residual_at(const ScalarField& unknown, double t) const { return residual(unknown, t); }

 private:
  ScalarField residual(const ScalarField& u, double t) const;
  MatrixGridField metric_from_unknown(const ScalarField& u, double t) const;
  double min_metric_eigenvalue(const MatrixGridField& g) const;

  TorusGrid grid_;
  SpectralOps ops_;
  Variant variant_;
  SolverConfig config_;
  Mat g_ref_;
  ScalarField phi0_;
  ScalarField ell0_;  // log(det g0 / det g_ref), unnormalized ansatz shift
  MatrixGridField omega0_;

  double t_ = 0.0;
  ScalarField u_;
  double residual_norm_ = 0.0;
  int newton_iters_ = 0;
  std::vector<double> newton_history_;

  double accepted_t_ = 0.0;
  ScalarField accepted_u_;
  double accepted_res_ = 0.0;
  int accepted_iters_ = 0;
};

}  // namespace conteq
