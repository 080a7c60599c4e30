#include "conteq/linalg.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace conteq {

Mat hermitize(const Mat& a) { return 0.5 * (a + a.adjoint()); }

double hermiticity_defect(const Mat& a) {
  return (a - Mat(a.adjoint())).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void require_positive_definite(const Mat& a, long point_index) {
  const double lam = min_eigenvalue(a);
  if (!(lam > 0.0)) {
    throw PointError("matrix not positive definite at sample " + std::to_string(point_index) +
                         " (min eigenvalue " + std::to_string(lam) + ")",
                     point_index, lam);
  }
}

RVec generalized_eigenvalues(const Mat& a, const Mat& b) {
  Eigen::LLT<Mat> llt(b);
  if (llt.info() != Eigen::Success) {
    throw PointError("reference matrix not positive definite in generalized eigensolve", -1,
                     min_eigenvalue(b));
  }
  const Mat l = llt.matrixL();
  // Whiten: solve L X = A, then X L^{-H}; result is Hermitian up to roundoff.
  Mat w = l.triangularView<Eigen::Lower>().solve(a);
  w = l.triangularView<Eigen::Lower>().solve(Mat(w.adjoint())).adjoint();
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(w), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double equivalence_eps(const Mat& a, const Mat& b) {
  const RVec lam = generalized_eigenvalues(a, b);
  return std::max(lam.maxCoeff() - 1.0, 1.0 - lam.minCoeff());
}

std::vector<cplx> det_pencil_coefficients(const Mat& a, const Mat& b) {
  const int n = static_cast<int>(a.rows());
  // Interpolate the degree-n polynomial det(A + sB) at s = 0..n.
  std::vector<cplx> values(n + 1);
  for (int s = 0; s <= n; ++s) values[s] = Mat(a + static_cast<double>(s) * b).determinant();
  // Solve the Vandermonde system by Newton's divided differences.
  std::vector<cplx> dd = values;
  for (int j = 1; j <= n; ++j)
    for (int i = n; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / static_cast<double>(j);
  // Expand the Newton form prod (s - i) into monomial coefficients.
  std::vector<cplx> coeff(n + 1, cplx{0, 0});
  std::vector<cplx> basis{cplx{1, 0}};  // starts as the constant polynomial 1
  for (int i = 0; i <= n; ++i) {
    for (size_t d = 0; d < basis.size(); ++d) coeff[d] += dd[i] * basis[d];
    // basis *= (s - i)
    basis.push_back(cplx{0, 0});
    for (size_t d = basis.size() - 1; d > 0; --d)
      basis[d] = basis[d - 1] - static_cast<double>(i) * basis[d];
    basis[0] *= -static_cast<double>(i);
  }
  return coeff;
}

double mixed_wedge_density(const Mat& a, const Mat& b, int k) {
  const int n = static_cast<int>(a.rows());
  const auto coeff = det_pencil_coefficients(a, b);
  // (A+sB)^n = sum_k C(n,k) s^{n-k} A^k ^ B^{n-k} = n! det(A+sB) V.
  const cplx c = coeff[static_cast<size_t>(n - k)];
  return factorial(n) * c.real() / binomial(n, k);
}

double top_wedge_density(const Mat& a) { return factorial(static_cast<int>(a.rows())) * a.determinant().real(); }

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace conteq
