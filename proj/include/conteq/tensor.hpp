#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace conteq {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Dense rank-3 complex tensor with equal extent per axis.
/// Index meaning is documented at each use site; this class is storage only.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), v_(static_cast<size_t>(n) * n * n, cplx{0.0, 0.0}) {}

  cplx& operator()(int i, int j, int k) { return v_[(static_cast<size_t>(i) * n_ + j) * n_ + k]; }
  cplx operator()(int i, int j, int k) const {
    return v_[(static_cast<size_t>(i) * n_ + j) * n_ + k];
  }
  int extent() const { return n_; }

  double sup_norm() const {
    double m = 0.0;
    for (const auto& x : v_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  int n_ = 0;
  std::vector<cplx> v_;
};

/// Dense rank-4 complex tensor with equal extent per axis.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n)
      : n_(n), v_(static_cast<size_t>(n) * n * n * n, cplx{0.0, 0.0}) {}

  cplx& operator()(int i, int j, int k, int l) {
    return v_[((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }
  cplx operator()(int i, int j, int k, int l) const {
    return v_[((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }
  int extent() const { return n_; }

  double sup_norm() const {
    double m = 0.0;
    for (const auto& x : v_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  int n_ = 0;
  std::vector<cplx> v_;
};

}  // namespace conteq
