#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "conteq/linalg.hpp"

using namespace conteq;

namespace {

Mat random_pd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx{nd(rng), nd(rng)};
  return Mat(a * a.adjoint()) + 0.05 * Mat::Identity(n, n);
}

}  // namespace

TEST_CASE("inverse of the identity and of a diagonal matrix") {
  Mat id = Mat::Identity(2, 2);
  CHECK((id.inverse() - id).cwiseAbs().maxCoeff() < 1e-12);
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 4.0;
  const Mat di = d.inverse();
  CHECK(std::abs(di(0, 0) - cplx{0.5, 0.0}) < 1e-12);
  CHECK(std::abs(di(1, 1) - cplx{0.25, 0.0}) < 1e-12);
}

TEST_CASE("random Hermitian inverses satisfy the product oracle") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    for (int n : {1, 2, 3}) {
      const Mat g = random_pd(n, rng);
      const Mat prod = g * g.inverse();
      CHECK((prod - Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("positive definiteness reporting carries the point index") {
  Mat bad = Mat::Identity(2, 2);
  bad(1, 1) = -0.5;
  try {
    require_positive_definite(bad, 17);
    CHECK(false);
  } catch (const PointError& e) {
    CHECK(e.point_index == 17);
    CHECK(e.min_eigenvalue == doctest::Approx(-0.5));
  }
}

TEST_CASE("generalized eigenvalues against the scalar case") {
  std::mt19937_64 rng(5);
  const Mat b = random_pd(3, rng);
  // a = 2 b has all generalized eigenvalues 2
  const Mat a = 2.0 * b;
  const RVec lam = generalized_eigenvalues(a, b);
  for (int i = 0; i < 3; ++i) CHECK(lam[i] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(equivalence_eps(a, b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equivalence eps is scale invariant") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    const Mat a = random_pd(2, rng);
    const Mat b = random_pd(2, rng);
    const double e1 = equivalence_eps(a, b);
    const double e2 = equivalence_eps(Mat(3.7 * a), Mat(3.7 * b));
    CHECK(e1 == doctest::Approx(e2).epsilon(1e-10));
  }
}

TEST_CASE("pencil determinant coefficients reproduce determinants") {
  std::mt19937_64 rng(7);
  const int n = 3;
  const Mat a = random_pd(n, rng), b = random_pd(n, rng);
  const auto coeff = det_pencil_coefficients(a, b);
  for (double s : {0.3, 1.7, 4.0}) {
    cplx val{0.0, 0.0};
    double p = 1.0;
    for (int k = 0; k <= n; ++k) {
      val += coeff[static_cast<size_t>(k)] * p;
      p *= s;
    }
    const cplx expect = Mat(a + s * b).determinant();
    CHECK(std::abs(val - expect) < 1e-8 * std::abs(expect));
  }
}

TEST_CASE("mixed wedge density: binomial expansion of det(A + B)") {
  std::mt19937_64 rng(9);
  for (int n : {2, 3}) {
    const Mat a = random_pd(n, rng), b = random_pd(n, rng);
    // sum_k C(n,k) A^k ^ B^{n-k} = (A + B)^n
    double total = 0.0;
    for (int k = 0; k <= n; ++k) total += binomial(n, k) * mixed_wedge_density(a, b, k);
    CHECK(total == doctest::Approx(top_wedge_density(Mat(a + b))).epsilon(1e-9));
    // pure powers agree with n! det
    CHECK(mixed_wedge_density(a, b, n) == doctest::Approx(top_wedge_density(a)).epsilon(1e-9));
    CHECK(mixed_wedge_density(a, b, 0) == doctest::Approx(top_wedge_density(b)).epsilon(1e-9));
  }
}
