#pragma once

#include <vector>

#include "conteq/fd_engine.hpp"
#include "conteq/tensor.hpp"

namespace conteq {

/// Complex-coordinate derivatives of a Hermitian matrix field at one point.
///
/// Index convention throughout the calculus: the stored matrix is
/// g(k, j) = g_{kbar j}, the coefficient of i dz^j ^ dzbar^k. Hermiticity of
/// the field makes antiholomorphic derivatives adjoints of holomorphic ones:
///   d_{abar} g       = (d1[a])^H
///   d_a d_b d_{cbar} g = d21[a][b][c]  and  d_a d_{bbar} d_{cbar} g = (d21[b][c][a])^H
struct MetricJet {
  int n = 0;
  Mat g;
  std::vector<Mat> d1;                             // d1[a]     = d_a g
  std::vector<std::vector<Mat>> d11;               // d11[a][b] = d_a d_bbar g
  bool has_third = false;
  std::vector<std::vector<Mat>> d20;               // d20[a][b] = d_a d_b g (with third order)
  std::vector<std::vector<std::vector<Mat>>> d21;  // d21[a][b][c] = d_a d_b d_cbar g

  Mat d1b(int a) const { return d1[static_cast<size_t>(a)].adjoint(); }
  Mat d02(int a, int b) const {  // d_abar d_bbar g
    return d20[static_cast<size_t>(a)][static_cast<size_t>(b)].adjoint();
  }
  Mat d12(int a, int b, int c) const {  // d_a d_bbar d_cbar g
    return d21[static_cast<size_t>(b)][static_cast<size_t>(c)][static_cast<size_t>(a)].adjoint();
  }
};

/// Value and complex derivatives of a real scalar field at one point
/// (through mixed second order).
struct ScalarJet {
  int n = 0;
  double v = 0.0;
  CVec d1;   // d1[a] = d_a f ; d_abar f = conj
  Mat d11;   // d11(a, b) = d_a d_bbar f
};

/// Assemble a metric jet from a derivative provider. order_requested is 2 for
/// first/second-derivative calculus (connection, curvature, the trace
/// formulas) and 3 when curvature derivatives are needed.
MetricJet metric_jet(const DerivProvider& f, const RVec& x, int order_requested);

ScalarJet scalar_jet(const ScalarFdProvider& f, const RVec& x);

/// Jet of the trace scalar tr_chi omega = chi^{p qbar} g_{qbar p} derived
/// analytically from the two metric jets (no extra differentiation).
ScalarJet trace_scalar_jet(const MetricJet& chi, const MetricJet& omega);

}  // namespace conteq
