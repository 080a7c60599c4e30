#include "conteq/diagnostics.hpp"

#include <cmath>

namespace conteq {

MaclaurinResult maclaurin_residuals(const Mat& omega, const Mat& omega_hat) {
  const int n = static_cast<int>(omega.rows());
  const RVec lam = generalized_eigenvalues(omega, omega_hat);
  double s = 0.0, si = 0.0, prod = 1.0;
  for (int i = 0; i < n; ++i) {
    s += lam[i];
    si += 1.0 / lam[i];
    prod *= lam[i];
  }
  const double nn = std::pow(static_cast<double>(n), n - 2);
  MaclaurinResult r;
  r.residual_fwd = std::pow(s, n - 1) / (nn * prod) - si;
  r.residual_bwd = std::pow(si, n - 1) * prod / nn - s;
  return r;
}

std::pair<double, double> ricci_eigenvalue_bounds(const Mat& ric, const Mat& omega) {
  const RVec lam = generalized_eigenvalues(hermitize(ric), omega);
  return {lam.minCoeff(), lam.maxCoeff()};
}

LinearFit least_squares_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

BlowupFit fit_blowup(const std::vector<double>& t, const std::vector<double>& sup_r) {
  std::vector<double> inv(sup_r.size());
  for (size_t i = 0; i < sup_r.size(); ++i) inv[i] = 1.0 / sup_r[i];
  const LinearFit f = least_squares_fit(t, inv);
  BlowupFit b;
  b.a = -1.0 / f.slope;
  b.T = -f.intercept / f.slope;
  return b;
}

MetricJet constant_metric_jet(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  MetricJet j;
  j.n = n;
  j.g = g;
  j.d1.assign(static_cast<size_t>(n), Mat::Zero(n, n));
  j.d11.assign(static_cast<size_t>(n), std::vector<Mat>(static_cast<size_t>(n), Mat::Zero(n, n)));
  return j;
}

DiagnosticsRow torus_row(const TorusSolver& solver, RowExtras* extras) {
  const TorusGrid& grid = solver.grid();
  const int n = grid.n_complex;
  const double t = solver.t();
  const bool normalized = solver.variant() == Variant::normalized;

  DiagnosticsRow row;
  row.t = t;

  const ScalarField phi = solver.phi();
  for (double v : phi) row.sup_abs_phi_scaled = std::max(row.sup_abs_phi_scaled, std::abs(v));
  row.sup_abs_phi_scaled *= (t + 1.0);

  const MatrixGridField omega = solver.omega();
  const MatrixGridField ref = solver.reference_metric();
  const MatrixGridField omega0 = solver.omega0();

  // The curvature pass runs on the t-slid unnormalized metric (t+1) omega,
  // whose jets are best conditioned for large t.
  MatrixGridField slid = omega;
  const double slide = normalized ? (t + 1.0) : 1.0;
  for (auto& e : slid.entries)
    for (auto& v : e) v *= slide;
  const GridJetField jets(solver.ops(), slid, 2);
  const MetricJet ref_jet = constant_metric_jet(solver.g_ref());

  double contracted = 0.0, maclaurin_worst = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    const Mat w = hermitize(omega.at(i));
    const Mat r = hermitize(ref.at(i));
    const Mat w0 = hermitize(omega0.at(i));

    const RVec lam = generalized_eigenvalues(w, r);
    double s = 0.0, si = 0.0, ld = 0.0;
    for (int k = 0; k < n; ++k) {
      s += lam[k];
      si += 1.0 / lam[k];
      ld += std::log(lam[k]);
    }
    row.trace_gap_fwd = std::max(row.trace_gap_fwd, s - n);
    row.trace_gap_bwd = std::max(row.trace_gap_bwd, si - n);
    row.equivalence_eps = std::max(row.equivalence_eps, std::max(lam.maxCoeff() - 1.0, 1.0 - lam.minCoeff()));
    row.det_log_ratio_scaled = std::max(row.det_log_ratio_scaled, t * std::abs(ld));

    const MaclaurinResult mac = maclaurin_residuals(w, r);
    maclaurin_worst = std::min(maclaurin_worst, std::min(mac.residual_fwd, mac.residual_bwd));

    const MetricJet jet = jets.at(i);
    ChernData cd = chern_connection(jet);
    fill_curvature(cd, jet);
    // invariants under the (t+1) slide: Ric unchanged, R scales by (t+1)
    const double R_run = cd.scalar * slide;
    row.scalar_R_sup = std::max(row.scalar_R_sup, R_run);
    const auto [rmin, rmax] = ricci_eigenvalue_bounds(cd.ricci_first, w);
    if (i == 0) {
      row.ricci_min = rmin;
      row.ricci_max = rmax;
    } else {
      row.ricci_min = std::min(row.ricci_min, rmin);
      row.ricci_max = std::max(row.ricci_max, rmax);
    }
    row.calabi_sup = std::max(row.calabi_sup, calabi_quantity(jet, ref_jet));

    // Variant-exact contracted identity, evaluated on the slid metric:
    // tr_slid(omega0) = n + t R(slid).
    const double tr0 = trace_form(hermitize(jet.g), w0);
    contracted = std::max(contracted, std::abs(tr0 - n - t * cd.scalar));
  }
  if (extras) {
    extras->contracted_residual = contracted;
    extras->maclaurin_worst = maclaurin_worst;
    extras->residual_norm = solver.residual_norm();
    extras->newton_iters = solver.newton_iters();
    extras->normalization_mismatch =
        (normalized && t > 0.0) ? solver.normalization_mismatch() : -1.0;
  }
  return row;
}

DiagnosticsRow sphere_row(const SphereSolver& solver, RowExtras* extras) {
  DiagnosticsRow row;
  const double t = solver.t();
  row.t = t;
  const bool normalized = false;  // sphere presets run the unnormalized equation

  const auto& a = solver.density();
  const auto& a0 = solver.density0();
  const auto& psi = solver.potential();
  const auto ref = solver.reference_density();
  const auto R = solver.scalar_curvature();
  const auto tr0 = solver.trace_of_initial();
  const auto S = solver.calabi();

  double contracted = 0.0;
  bool first = true;
  for (int i = 0; i < solver.cells(); ++i) {
    const size_t k = static_cast<size_t>(i);
    row.sup_abs_phi_scaled = std::max(row.sup_abs_phi_scaled, std::abs(psi[k]) * (t + 1.0));
    if (ref[k] > 0.0) {
      const double lam = a[k] / ref[k];
      row.trace_gap_fwd = std::max(row.trace_gap_fwd, lam - 1.0);
      row.trace_gap_bwd = std::max(row.trace_gap_bwd, 1.0 / lam - 1.0);
      row.equivalence_eps = std::max(row.equivalence_eps, std::abs(lam - 1.0));
      row.det_log_ratio_scaled = std::max(row.det_log_ratio_scaled, t * std::abs(std::log(lam)));
    }
    row.scalar_R_sup = first ? R[k] : std::max(row.scalar_R_sup, R[k]);
    // n = 1: Ric relative to omega is R itself.
    row.ricci_min = first ? R[k] : std::min(row.ricci_min, R[k]);
    row.ricci_max = first ? R[k] : std::max(row.ricci_max, R[k]);
    row.calabi_sup = std::max(row.calabi_sup, S[k]);
    contracted = std::max(contracted, std::abs(tr0[k] - 1.0 - t * R[k]));
    first = false;
  }
  (void)normalized;
  (void)a0;
  if (extras) {
    extras->contracted_residual = contracted;
    extras->residual_norm = solver.residual_norm();
    extras->newton_iters = solver.newton_iters();
  }
  return row;
}

DiagnosticsRow ot_family_row(int n, double t, const std::vector<ot::ModelPoint>& samples,
                             RowExtras* extras) {
  DiagnosticsRow row;
  row.t = t;
  const double phi = t > 0.0 ? ot::explicit_family_potential(n, t, samples.front()) : 0.0;
  row.sup_abs_phi_scaled = std::abs(phi) * (t + 1.0);
  // omega = omega_hat exactly along the explicit family.
  row.det_log_ratio_scaled = 0.0;
  row.trace_gap_fwd = row.trace_gap_bwd = row.equivalence_eps = 0.0;

  const AnalyticMatrixField hat = ot::omega_hat(n, t);
  const ExactProvider prov(hat);
  bool first = true;
  for (const auto& p : samples) {
    const MetricJet jet = metric_jet(prov, p.coords, 2);
    ChernData cd = chern_connection(jet);
    fill_curvature(cd, jet);
    row.scalar_R_sup = first ? cd.scalar : std::max(row.scalar_R_sup, cd.scalar);
    const auto [rmin, rmax] = ricci_eigenvalue_bounds(cd.ricci_first, hermitize(jet.g));
    row.ricci_min = first ? rmin : std::min(row.ricci_min, rmin);
    row.ricci_max = first ? rmax : std::max(row.ricci_max, rmax);
    first = false;
  }
  row.calabi_sup = ot_stretched_calabi_sup(n, t, samples);
  const ot::CollapseProxy proxy = ot::gh_collapse_proxy(n, t, samples);
  row.gh_proxy = proxy.total();
  if (extras) {
    extras->contracted_residual = 0.0;
    extras->normalization_mismatch = t > 0.0 ? ot::normalization_mismatch(n, t, samples) : -1.0;
  }
  return row;
}

double ot_stretched_calabi_sup(int n, double t, const std::vector<ot::ModelPoint>& samples) {
  // lambda_t^* omega_hat(t) = alpha + beta + gamma/(t+1)
  AnalyticMatrixField stretched = AnalyticMatrixField::sum(
      AnalyticMatrixField::sum(ot::alpha_form(n), ot::beta_form(n)),
      ot::gamma_form(n).scaled(1.0 / (t + 1.0)));
  const ExactProvider prov(stretched);
  const MetricJet euclid = constant_metric_jet(Mat::Identity(n, n));
  double sup = 0.0;
  for (const auto& p : samples) {
    const MetricJet jet = metric_jet(prov, p.coords, 2);
    sup = std::max(sup, calabi_quantity(jet, euclid));
  }
  return sup;
}

}  // namespace conteq
