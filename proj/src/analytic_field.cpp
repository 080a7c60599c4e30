#include "conteq/analytic_field.hpp"

#include <cmath>
#include <numbers>

namespace conteq {

double Factor::deriv(double x, int m) const {
  switch (kind) {
    case COS:
      return std::pow(k_or_e, m) * std::cos(k_or_e * x + phase + m * std::numbers::pi / 2.0);
    case POW: {
      if (k_or_e == 0.0) return m == 0 ? 1.0 : 0.0;
      double c = 1.0;
      for (int i = 0; i < m; ++i) c *= (k_or_e - i);
      if (c == 0.0) return 0.0;
      return c * std::pow(x, k_or_e - m);
    }
    case LOG: {
      if (m == 0) return std::log(x);
      double c = (m % 2 == 0) ? -1.0 : 1.0;
      for (int i = 1; i < m; ++i) c *= i;
      return c * std::pow(x, -m);
    }
  }
  return 0.0;
}

cplx Term::deriv(std::span<const double> x, std::span<const int> multi) const {
  cplx v = coeff;
  for (size_t d = 0; d < factors.size(); ++d) {
    const int m = d < multi.size() ? multi[d] : 0;
    v *= factors[d].deriv(x[d], m);
    if (v == cplx{0.0, 0.0}) return v;
  }
  return v;
}

namespace {

/// Symbolic derivative of a term along one real dimension; the result is a
/// term of the same family (COS stays COS with a phase shift, POW drops its
/// exponent, LOG becomes POW).
Term differentiate_term(Term t, int dim, int order) {
  Factor& f = t.factors[static_cast<size_t>(dim)];
  for (int m = 0; m < order; ++m) {
    switch (f.kind) {
      case Factor::COS:
        t.coeff *= f.k_or_e;
        f.phase += std::numbers::pi / 2.0;
        break;
      case Factor::POW:
        t.coeff *= f.k_or_e;
        f.k_or_e -= 1.0;
        break;
      case Factor::LOG:
        f.kind = Factor::POW;
        f.k_or_e = -1.0;
        break;
    }
    if (t.coeff == cplx{0.0, 0.0}) break;
  }
  return t;
}

}  // namespace

double AnalyticScalar::eval(const RVec& x) const { return deriv(x, {}).real(); }

cplx AnalyticScalar::deriv(const RVec& x, std::span<const int> multi) const {
  cplx v{0.0, 0.0};
  std::span<const double> xs(x.data(), static_cast<size_t>(x.size()));
  for (const auto& t : terms_) v += t.deriv(xs, multi);
  return v;
}

void AnalyticMatrixField::add_matrix_term(const Mat& h, const Term& shape) {
  for (int k = 0; k < n_; ++k)
    for (int j = 0; j < n_; ++j) {
      if (h(k, j) == cplx{0.0, 0.0}) continue;
      Term t = shape;
      t.coeff *= h(k, j);
      add_term(k, j, std::move(t));
    }
}

Mat AnalyticMatrixField::deriv(const RVec& x, std::span<const int> multi) const {
  Mat out = Mat::Zero(n_, n_);
  std::span<const double> xs(x.data(), static_cast<size_t>(x.size()));
  for (int k = 0; k < n_; ++k)
    for (int j = 0; j < n_; ++j)
      for (const auto& t : entries_[static_cast<size_t>(k) * n_ + j]) out(k, j) += t.deriv(xs, multi);
  return out;
}

AnalyticMatrixField AnalyticMatrixField::scaled(cplx s) const {
  AnalyticMatrixField r = *this;
  for (auto& series : r.entries_)
    for (auto& t : series) t.coeff *= s;
  return r;
}

AnalyticMatrixField AnalyticMatrixField::sum(const AnalyticMatrixField& a, const AnalyticMatrixField& b) {
  AnalyticMatrixField r = a;
  for (int k = 0; k < b.n_; ++k)
    for (int j = 0; j < b.n_; ++j)
      for (const auto& t : b.entries_[static_cast<size_t>(k) * b.n_ + j]) r.add_term(k, j, t);
  return r;
}

std::vector<Factor> unit_factors(int rdim) {
  return std::vector<Factor>(static_cast<size_t>(rdim), Factor{Factor::POW, 0.0, 0.0});
}

AnalyticMatrixField i_ddbar(const AnalyticScalar& psi, int n) {
  AnalyticMatrixField out(n, psi.rdim());
  const cplx I{0.0, 1.0};
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      // d_j d_kbar = 1/4 (dx_j dx_k + dy_j dy_k) + i/4 (dx_j dy_k - dy_j dx_k)
      struct Piece {
        int d1, d2;
        cplx w;
      };
      const Piece pieces[4] = {
          {2 * j, 2 * k, cplx{0.25, 0.0}},
          {2 * j, 2 * k + 1, 0.25 * I},
          {2 * j + 1, 2 * k, -0.25 * I},
          {2 * j + 1, 2 * k + 1, cplx{0.25, 0.0}},
      };
      for (const auto& p : pieces) {
        for (const Term& t : psi.terms()) {
          Term d = differentiate_term(differentiate_term(t, p.d1, 1), p.d2, 1);
          d.coeff *= p.w;
          if (d.coeff != cplx{0.0, 0.0}) out.add_term(k, j, std::move(d));
        }
      }
    }
  }
  return out;
}

AnalyticScalar random_scalar(int rdim, std::mt19937_64& rng, int modes, double amplitude,
                             int max_freq) {
  std::uniform_int_distribution<int> freq(-max_freq, max_freq);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> amp(0.0, 1.0);
  AnalyticScalar s(rdim);
  for (int m = 0; m < modes; ++m) {
    Term t;
    t.coeff = amp(rng) * amplitude / modes;
    t.factors = unit_factors(rdim);
    for (int d = 0; d < rdim; ++d) {
      const int f = freq(rng);
      if (f == 0) continue;
      t.factors[static_cast<size_t>(d)] = Factor{Factor::COS, static_cast<double>(f), phase(rng)};
    }
    s.add(std::move(t));
  }
  return s;
}

AnalyticMatrixField random_metric(int n, std::mt19937_64& rng, double amplitude, int modes,
                                  int max_freq) {
  const int rdim = 2 * n;
  AnalyticMatrixField g(n, rdim);
  Term unit;
  unit.factors = unit_factors(rdim);
  g.add_matrix_term(Mat::Identity(n, n), unit);

  std::uniform_int_distribution<int> freq(-max_freq, max_freq);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> amp(0.0, 1.0);
  for (int m = 0; m < modes; ++m) {
    Mat h = Mat::Zero(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) h(a, b) = cplx{amp(rng), amp(rng)};
    h = 0.5 * (h + h.adjoint()).eval();
    Term t;
    t.coeff = amplitude / modes;
    t.factors = unit_factors(rdim);
    for (int d = 0; d < rdim; ++d) {
      const int f = freq(rng);
      if (f == 0) continue;
      t.factors[static_cast<size_t>(d)] = Factor{Factor::COS, static_cast<double>(f), phase(rng)};
    }
    g.add_matrix_term(h, t);
  }
  return g;
}

}  // namespace conteq
