#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "conteq/analytic_field.hpp"
#include "conteq/tensor.hpp"

namespace conteq {

/// Finite-difference weights for the m-th derivative at 0 on the given nodes
/// (Fornberg's algorithm). nodes must be distinct.
std::vector<double> fd_weights(std::span<const double> nodes, int m);

/// A matrix-valued field over real coordinates exposing mixed partial
/// derivatives d^{|multi|} F / prod dx_d^{multi_d}. The two implementations
/// are the central-difference engine (production path) and exact analytic
/// derivatives (oracle path).
class DerivProvider {
 public:
  virtual ~DerivProvider() = default;
  virtual int dim() const = 0;
  virtual int rdim() const = 0;
  virtual Mat deriv(const RVec& x, std::span<const int> multi) const = 0;
  Mat eval(const RVec& x) const { return deriv(x, {}); }
};

using MatrixFn = std::function<Mat(const RVec&)>;

/// Central finite differences of configurable even order on tensor-product
/// stencils. Step sizes are per-axis.
class FdProvider : public DerivProvider {
 public:
  FdProvider(int n, int rdim, MatrixFn f, int order = 4, double step = 1e-2);

  int dim() const override { return n_; }
  int rdim() const override { return rdim_; }
  void set_step(double h) { steps_.assign(steps_.size(), h); }
  void set_steps(std::vector<double> h) { steps_ = std::move(h); }
  int order() const { return order_; }
  double step(int d) const { return steps_[static_cast<size_t>(d)]; }

  Mat deriv(const RVec& x, std::span<const int> multi) const override;

 private:
  int n_, rdim_, order_;
  std::vector<double> steps_;
  MatrixFn f_;
};

/// Exact derivatives of an analytic field.
class ExactProvider : public DerivProvider {
 public:
  explicit ExactProvider(AnalyticMatrixField f) : f_(std::move(f)) {}
  int dim() const override { return f_.dim(); }
  int rdim() const override { return f_.rdim(); }
  Mat deriv(const RVec& x, std::span<const int> multi) const override { return f_.deriv(x, multi); }

 private:
  AnalyticMatrixField f_;
};

/// Scalar counterparts, used for log-determinant and trace fields.
using ScalarFn = std::function<double(const RVec&)>;

class ScalarFdProvider {
 public:
  ScalarFdProvider(int rdim, ScalarFn f, int order = 4, double step = 1e-2);
  int rdim() const { return rdim_; }
  void set_steps(std::vector<double> h) { steps_ = std::move(h); }
  double eval(const RVec& x) const { return f_(x); }
  double deriv(const RVec& x, std::span<const int> multi) const;

 private:
  int rdim_, order_;
  std::vector<double> steps_;
  ScalarFn f_;
};

/// Complex-coordinate derivative of a matrix field at x. dirs lists the
/// complex directions applied left to right; barred[i] selects d/dzbar.
/// Real layout: z_a = x[2a] + i x[2a+1].
Mat complex_deriv(const DerivProvider& f, const RVec& x, std::span<const int> dirs,
                  std::span<const bool> barred);

cplx complex_deriv_scalar(const ScalarFdProvider& f, const RVec& x, std::span<const int> dirs,
                          std::span<const bool> barred);

}  // namespace conteq
