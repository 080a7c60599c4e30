#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "conteq/tensor.hpp"

namespace conteq {

/// Error carrying the sample index at which a pointwise precondition failed.
class PointError : public std::runtime_error {
 public:
  PointError(std::string msg, long point_index, double min_eigenvalue)
      : std::runtime_error(std::move(msg)),
        point_index(point_index),
        min_eigenvalue(min_eigenvalue) {}
  long point_index;
  double min_eigenvalue;
};

/// (A + A^H)/2.
Mat hermitize(const Mat& a);

/// Largest entrywise deviation |A - A^H|.
double hermiticity_defect(const Mat& a);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const Mat& a);

/// Throws PointError if the Hermitian matrix is not positive definite.
void require_positive_definite(const Mat& a, long point_index);

/// Eigenvalues of b^{-1} a for Hermitian a and Hermitian positive definite b,
/// computed by Cholesky whitening of b followed by a Hermitian eigensolve.
/// Returned ascending.
RVec generalized_eigenvalues(const Mat& a, const Mat& b);

/// Smallest eps >= 0 with (1-eps) b <= a <= (1+eps) b in the eigenvalue sense.
double equivalence_eps(const Mat& a, const Mat& b);

/// Coefficients c_0..c_n of det(A + s B) as a polynomial in s,
/// computed by interpolation at s = 0..n.
std::vector<cplx> det_pencil_coefficients(const Mat& a, const Mat& b);

/// Value of (A^k wedge B^{n-k}) / V where V = prod_j (i dz^j wedge dzbar^j),
/// for (1,1)-forms with coefficient matrices A, B. Uses
/// (A + sB)^n = n! det(A + sB) V and binomial extraction.
double mixed_wedge_density(const Mat& a, const Mat& b, int k);

/// n! det(A): the density of the top power of a (1,1)-form against V.
double top_wedge_density(const Mat& a);

double binomial(int n, int k);
double factorial(int n);

}  // namespace conteq
