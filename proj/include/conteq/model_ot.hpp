#pragma once

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "conteq/analytic_field.hpp"
#include "conteq/chern.hpp"
#include "conteq/fd_engine.hpp"

namespace conteq {
namespace ot {

/// Evaluation point on H^{n-1} x C with y_j = Im z_j > 0. Real layout
/// [x_1, y_1, ..., x_{n-1}, y_{n-1}, Re w, Im w]; complex direction n-1 is w.
struct ModelPoint {
  RVec coords;
  int n = 2;

  double y(int j) const { return coords[2 * j + 1]; }
  bool valid() const {
    for (int j = 0; j + 1 < n; ++j)
      if (!(y(j) > 0.0)) return false;
    return true;
  }
};

void require_valid(const ModelPoint& p);

/// The model (1,1)-forms in global coordinates:
///   alpha: diagonal sum_j 1/(4 y_j^2) i dz^j ^ dzbar^j     (rank n-1)
///   beta:  y_1...y_{n-1} i dw ^ dwbar                      (rank 1)
///   gamma: full double sum 1/(4 y_j y_k) i dz^j ^ dzbar^k  (rank 1, j=k kept)
///   metric = alpha + beta + gamma (positive definite)
AnalyticMatrixField alpha_form(int n);
AnalyticMatrixField beta_form(int n);
AnalyticMatrixField gamma_form(int n);
AnalyticMatrixField ot_metric(int n);
/// Reference family member (base + t alpha) / (t+1); base defaults to the
/// model metric.
AnalyticMatrixField omega_hat(int n, double t);
AnalyticMatrixField omega_hat(const AnalyticMatrixField& base, int n, double t);

/// Volume density Omega / V = (n-1)! / (4^{n-1} y_1...y_{n-1}) where
/// V = prod_j i dz^j ^ dzbar^j ^ i dw ^ dwbar, and its logarithm with exact
/// derivatives.
double omega_density(int n, const ModelPoint& p);
AnalyticScalar log_omega_density(int n);

/// Uniform sample points in the box y in [0.5, 2]^{n-1}, |Re z| <= 1, |w| <= 1.
std::vector<ModelPoint> sample_points(int n, std::mt19937_64& rng, int count);

/// i ddbar log Omega - alpha by finite differences; sup-norm of the residual.
double ddbar_log_omega_residual(int n, const ModelPoint& p, int fd_order = 6, double fd_step = 5e-3);

struct FlatnessReport {
  bool strongly_flat = false;
  double c = 0.0;
  double relative_spread = 0.0;
};

/// Checks g_{wbar w} = c y_1...y_{n-1} for one constant c across samples.
FlatnessReport strongly_flat_check(const MatrixFn& candidate, int n,
                                   const std::vector<ModelPoint>& samples, double tol = 1e-8);

/// Conformal factor c Omega / (alpha^{n-1} ^ candidate) applied pointwise;
/// target c defaults to the mean ratio of the candidate itself.
MatrixFn conformal_normalize(const MatrixFn& candidate, int n,
                             const std::vector<ModelPoint>& probe, std::optional<double> c = {});

struct ParallelReport {
  bool weakly_parallel = false;
  double sup_dw = 0.0;
};

/// Whether d/dw of the (wbar, w) component vanishes over the samples.
ParallelReport weakly_parallel_check(const MatrixFn& theta, int n,
                                     const std::vector<ModelPoint>& samples, int fd_order = 6,
                                     double fd_step = 1e-3, double tol = 1e-8);

/// Residual of (t+1) omega_hat - omega_OT + t Ric(omega_hat) at p, with the
/// Ricci form computed numerically from the metric field.
double explicit_solution_residual(int n, double t, const ModelPoint& p, int fd_order = 6,
                                  double fd_step = 5e-3);

struct StretchReport {
  double factor = 1.0;       // exact pullback factor
  double max_rel_error = 0;  // numerical verification against the transformed frame
};

enum class ModelForm { alpha, beta, gamma };

/// Pullback factor of the leaf-stretching map (z, w) -> (z, sqrt(t+1) w).
StretchReport leaf_stretch_pullback(int n, double t, ModelForm form,
                                    const std::vector<ModelPoint>& samples);

struct ExpansionReport {
  double lhs = 0.0;                // (t+1)^n omega_hat^n / (c n t^{n-1} Omega)
  double rhs = 0.0;                // 1 + f_1/t + ... + f_{n-1}/t^{n-1}
  std::vector<double> f;           // f_1 ... f_{n-1}
  double mismatch = 0.0;           // |lhs - rhs|
  bool coefficients_nonneg = true;
  bool log_bound_holds = true;     // t log lhs <= f_1 + ... + f_{n-1}
};

/// Volume expansion of the reference family at p for t >= 1 (rejected below).
ExpansionReport expansion_coefficients(int n, double t, const ModelPoint& p,
                                       const AnalyticMatrixField* base = nullptr, double c = 1.0);

/// The potential value solving the pointwise normalized scalar equation for
/// the explicit family ((5.9)-determined constant; spatially constant when the
/// base is the model metric).
double explicit_family_potential(int n, double t, const ModelPoint& p, double phi0 = 0.0);

/// Relative mismatch of the integral normalization for the explicit family,
/// by quadrature over the sample box.
double normalization_mismatch(int n, double t, const std::vector<ModelPoint>& quad_points);

/// Fiber-collapse proxy: sup over samples of the omega_hat(t)-length of a
/// unit leaf segment plus the sup deviation of the base block from alpha.
struct CollapseProxy {
  double fiber = 0.0;
  double base_deviation = 0.0;
  double total() const { return fiber + base_deviation; }
};
CollapseProxy gh_collapse_proxy(int n, double t, const std::vector<ModelPoint>& samples);

}  // namespace ot
}  // namespace conteq
