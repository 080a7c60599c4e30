#pragma once

#include <functional>
#include <random>
#include <span>
#include <vector>

#include "conteq/tensor.hpp"

namespace conteq {

/// One separable factor f(x_d) of an analytic term. Derivatives of any order
/// are available in closed form:
///   COS : f = cos(k x + phase),  f^(m) = k^m cos(k x + phase + m pi/2)
///   POW : f = x^e,               f^(m) = e (e-1) ... (e-m+1) x^{e-m}
///   LOG : f = log(x),            f^(m) = (-1)^{m-1} (m-1)! x^{-m},  m >= 1
struct Factor {
  enum Kind { COS, POW, LOG } kind = POW;
  double k_or_e = 0.0;  // frequency (COS) or exponent (POW); unused for LOG
  double phase = 0.0;   // COS only
  double deriv(double x, int m) const;
};

/// coeff * prod over real dimensions of factor_d(x_d).
/// factors.size() equals the number of real dimensions of the field.
struct Term {
  cplx coeff{1.0, 0.0};
  std::vector<Factor> factors;
  cplx deriv(std::span<const double> x, std::span<const int> multi) const;
};

/// Scalar-valued analytic function of rdim real coordinates.
class AnalyticScalar {
 public:
  AnalyticScalar() = default;
  explicit AnalyticScalar(int rdim) : rdim_(rdim) {}

  int rdim() const { return rdim_; }
  void add(Term t) { terms_.push_back(std::move(t)); }
  const std::vector<Term>& terms() const { return terms_; }

  double eval(const RVec& x) const;
  cplx deriv(const RVec& x, std::span<const int> multi) const;

 private:
  int rdim_ = 0;
  std::vector<Term> terms_;
};

/// Matrix-valued analytic function of rdim real coordinates; entries are term
/// series. Entry (k, j) stores the component attached to i dz^j ^ dzbar^k, so
/// for a Hermitian form the matrix is Hermitian at every point.
class AnalyticMatrixField {
 public:
  AnalyticMatrixField() = default;
  AnalyticMatrixField(int n, int rdim) : n_(n), rdim_(rdim), entries_(static_cast<size_t>(n) * n) {}

  int dim() const { return n_; }
  int rdim() const { return rdim_; }

  void add_term(int k, int j, Term t) { entries_[static_cast<size_t>(k) * n_ + j].push_back(std::move(t)); }
  /// Adds H * s(x) for a constant matrix H and a scalar term shape.
  void add_matrix_term(const Mat& h, const Term& shape);

  Mat eval(const RVec& x) const { return deriv(x, {}); }
  Mat deriv(const RVec& x, std::span<const int> multi) const;

  AnalyticMatrixField scaled(cplx s) const;
  static AnalyticMatrixField sum(const AnalyticMatrixField& a, const AnalyticMatrixField& b);

 private:
  int n_ = 0;
  int rdim_ = 0;
  std::vector<std::vector<Term>> entries_;
};

/// Constant factor list: the identity element prod_d x_d^0.
std::vector<Factor> unit_factors(int rdim);

/// i ddbar of an analytic scalar as an analytic matrix field:
/// (i ddbar psi)_{kbar j} = d_j d_kbar psi. Real coordinates are ordered
/// [x_0, y_0, ..., x_{n-1}, y_{n-1}] with z_a = x_a + i y_a.
AnalyticMatrixField i_ddbar(const AnalyticScalar& psi, int n);

/// Random draws used by the identity fuzz suites. All are analytic with
/// closed-form derivatives, Hermitian, and positive definite near the draw
/// amplitude defaults.
AnalyticScalar random_scalar(int rdim, std::mt19937_64& rng, int modes = 6, double amplitude = 0.3,
                             int max_freq = 2);
AnalyticMatrixField random_metric(int n, std::mt19937_64& rng, double amplitude = 0.1,
                                  int modes = 6, int max_freq = 2);

}  // namespace conteq
