#pragma once

#include <vector>

#include "conteq/chern.hpp"
#include "conteq/model_ot.hpp"
#include "conteq/sphere_solver.hpp"
#include "conteq/torus_solver.hpp"

namespace conteq {

/// One time slice of every tracked estimate functional. Fields match the
/// run.csv columns in order.
struct DiagnosticsRow {
  double t = 0.0;
  double sup_abs_phi_scaled = 0.0;   // sup|phi| (t+1)
  double det_log_ratio_scaled = 0.0; // t sup|log(omega^n / ref^n)|
  double trace_gap_fwd = 0.0;        // sup(tr_ref omega - n)
  double trace_gap_bwd = 0.0;        // sup(tr_omega ref - n)
  double equivalence_eps = 0.0;      // smallest eps with (1-eps) ref <= omega <= (1+eps) ref
  double calabi_sup = 0.0;
  double scalar_R_sup = 0.0;
  double ricci_min = 0.0;
  double ricci_max = 0.0;
  double gh_proxy = 0.0;
};

/// Side data not in the CSV contract, used by the run report assertions.
struct RowExtras {
  double contracted_residual = 0.0;  // variant-exact trace identity residual
  double maclaurin_worst = 0.0;      // most negative Maclaurin residual on the slice
  double residual_norm = 0.0;
  int newton_iters = 0;
  double normalization_mismatch = -1.0;  // < 0 when not applicable
};

struct MaclaurinResult {
  double residual_fwd = 0.0;  // RHS - LHS of the inverse-trace bound
  double residual_bwd = 0.0;  // symmetric form
};

/// Both Maclaurin trace inequalities for a positive-definite pair.
MaclaurinResult maclaurin_residuals(const Mat& omega, const Mat& omega_hat);

/// (min, max) generalized eigenvalues of ric against omega.
std::pair<double, double> ricci_eigenvalue_bounds(const Mat& ric, const Mat& omega);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinearFit least_squares_fit(const std::vector<double>& x, const std::vector<double>& y);

struct BlowupFit {
  double a = 0.0;
  double T = 0.0;
};
/// Fits sup R ~ a / (T - t) by regressing 1/sup R on t.
BlowupFit fit_blowup(const std::vector<double>& t, const std::vector<double>& sup_r);

/// Jet of a constant reference metric (all derivatives zero).
MetricJet constant_metric_jet(const Mat& g);

/// Full diagnostics row for an accepted torus state.
DiagnosticsRow torus_row(const TorusSolver& solver, RowExtras* extras = nullptr);

/// Full diagnostics row for an accepted sphere state.
DiagnosticsRow sphere_row(const SphereSolver& solver, RowExtras* extras = nullptr);

/// Diagnostics row for the explicit reference family on the model geometry,
/// evaluated over a fixed sample set. calabi_box carries the stretched-family
/// samples (compact box) used for the Calabi series.
DiagnosticsRow ot_family_row(int n, double t, const std::vector<ot::ModelPoint>& samples,
                             RowExtras* extras = nullptr);

/// Calabi quantity of the stretched family against the Euclidean reference,
/// sup over the samples.
double ot_stretched_calabi_sup(int n, double t, const std::vector<ot::ModelPoint>& samples);

}  // namespace conteq
