#pragma once

#include <array>

#include "conteq/jet.hpp"
#include "conteq/linalg.hpp"
#include "conteq/tensor.hpp"

namespace conteq {

/// Pointwise Chern-connection data of a Hermitian metric.
///
/// Index conventions (fixed project-wide):
///   gamma(p, j, r)       Gamma^p_{jr} = g^{p qbar} d_j g_{qbar r}
///   torsion(p, j, r)     T^p_{jr} = Gamma^p_{jr} - Gamma^p_{rj}
///   torsion_low(i, j, k) T_{ij kbar} = g_{kbar r} T^r_{ij}
///   tau(j)               T^p_{pj}
///   curv(k, j, p, r)     R_{kbar j}^p_r = -d_kbar Gamma^p_{jr}
///   curv_low(k, j, l, r) R_{kbar j lbar r} = g_{lbar p} R_{kbar j}^p_r
///   ricci_first(k, j)    R_{kbar j} = R_{kbar j}^p_p
///   ricci_second(k, j)   R'_{kbar j} = g^{p lbar} R_{lbar p kbar j}
///   scalar               R = g^{j kbar} R_{kbar j}
/// Raising and lowering always go through the metric that owns the tensor.
struct ChernData {
  int n = 0;
  Mat g, ginv;
  Tensor3 gamma;
  bool has_torsion = false;
  Tensor3 torsion;
  Tensor3 torsion_low;
  CVec tau;
  bool has_curvature = false;
  Tensor4 curv;
  Tensor4 curv_low;
  Mat ricci_first;
  Mat ricci_second;
  double scalar = 0.0;
};

/// Connection coefficients only.
ChernData chern_connection(const MetricJet& jet);
/// Fills torsion, lowered torsion and the torsion 1-form from gamma.
void fill_torsion(ChernData& cd);
/// Fills curvature, both Ricci tensors and the scalar curvature.
void fill_curvature(ChernData& cd, const MetricJet& jet);
/// All of the above.
ChernData chern_data(const MetricJet& jet);

/// tr_ref(form) = ref^{j kbar} form_{kbar j}; imaginary part must vanish for
/// Hermitian input (checked against tol).
double trace_form(const Mat& ref, const Mat& form, double tol = 1e-9);

/// Residual tensors of the five torsion/curvature commutation identities,
/// evaluated as LHS - RHS. Identity 3 carries its two stated right-hand
/// sides; both residuals are reported.
struct CommutationResiduals {
  Tensor4 antisym_unbarred;     // R_{jbar i lbar k} - R_{jbar k lbar i} + nabla_jbar T_{ik lbar}
  Tensor4 antisym_barred;       // R_{jbar i lbar k} - R_{lbar i jbar k} + nabla_i T_{jbar lbar k}
  Tensor4 pair_swap_a;          // R_{jbar i lbar k} - R_{lbar k jbar i} + nabla_jbar T + nabla_k T
  Tensor4 pair_swap_b;          // same LHS with the second stated RHS
  double bianchi_unbarred = 0;  // sup over the nabla R identity in holomorphic slots
  double bianchi_barred = 0;    // sup over its conjugate
  std::array<double, 6> sups() const;
};

/// Jet-algebraic form: every derivative expanded symbolically from one point
/// jet. The identities hold exactly for any consistent jet, so this checks
/// formula transcription, not differentiation.
CommutationResiduals commutation_residuals_jet(const MetricJet& jet);

/// Engine form: the lowered torsion and curvature fields are evaluated around
/// x and differentiated with central differences of the given order, then
/// corrected covariantly with the center connection. Residuals measure the
/// differentiation error budget and shrink at the scheme order.
CommutationResiduals commutation_residuals(const DerivProvider& field, const RVec& x,
                                           int order = 6, double step = 1e-2,
                                           const std::vector<double>* axis_steps = nullptr);

/// Both Cherrier trace Laplacian identities for a pair (chi, omega) with
/// d(omega - chi) = 0, plus the pointwise nonnegativity gap.
struct CherrierResult {
  double lhs_trace = 0.0;       // Delta_omega tr_chi omega
  double rhs_trace = 0.0;
  double residual_trace = 0.0;  // |lhs - rhs| of the trace identity
  double lhs_log = 0.0;
  double rhs_log = 0.0;
  double residual_log = 0.0;
  double gap = 0.0;             // Phi-square term minus Psi-square term, >= 0
  double closedness = 0.0;      // sup-norm of d(omega - chi) first-order test
};

/// Throws PointError when the exterior-derivative test of omega - chi
/// exceeds closedness_tol.
CherrierResult cherrier_checks(const MetricJet& chi, const MetricJet& omega,
                               double closedness_tol = 1e-6);

/// sup |d_j (a-b)_{qbar p} - d_p (a-b)_{qbar j}| over indices: first-order
/// closedness test of the difference of two Hermitian forms.
double closedness_residual(const MetricJet& a, const MetricJet& b);

/// Calabi quantity S = |nabla-hat chi|^2 measured with chi, where nabla-hat
/// is the Chern connection of chi_hat.
double calabi_quantity(const MetricJet& chi, const MetricJet& chi_hat);

/// sup-norm of the lowered-torsion difference of two metrics, valid when
/// omega - omega0 is closed. Throws PointError on closedness violation.
double torsion_transfer_residual(const MetricJet& omega, const MetricJet& omega0,
                                 double closedness_tol = 1e-6);

/// The algebraic gap of the log-trace identity for given free data:
/// g^{j kbar} chi^{p qbar} g_{sbar r} Phi^r_{pj} conj(Phi^s_{qk})
///   - (1/tr_chi g) g^{j kbar} Psi_j conj(Psi_k)
/// with Psi_j = chi^{p qbar} g_{qbar r} Phi^r_{pj}. Used by the pointwise
/// sampling oracle.
double aubin_yau_gap_pointwise(const Mat& g, const Mat& chi, const Tensor3& phi);

}  // namespace conteq
