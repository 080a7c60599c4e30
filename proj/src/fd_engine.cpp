#include "conteq/fd_engine.hpp"

#include <cmath>

namespace conteq {

std::vector<double> fd_weights(std::span<const double> nodes, int m) {
  // Fornberg (1988), weights for derivative order m at x0 = 0.
  const int nn = static_cast<int>(nodes.size());
  std::vector<std::vector<double>> c(static_cast<size_t>(nn), std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0];
  c[0][0] = 1.0;
  for (int i = 1; i < nn; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<size_t>(i)];
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<size_t>(i)] - nodes[static_cast<size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[static_cast<size_t>(i)][k] = c1 * (k * c[static_cast<size_t>(i - 1)][k - 1] - c5 * c[static_cast<size_t>(i - 1)][k]) / c2;
        c[static_cast<size_t>(i)][0] = -c1 * c5 * c[static_cast<size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[static_cast<size_t>(j)][k] = (c4 * c[static_cast<size_t>(j)][k] - k * c[static_cast<size_t>(j)][k - 1]) / c3;
      c[static_cast<size_t>(j)][0] = c4 * c[static_cast<size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<size_t>(nn));
  for (int i = 0; i < nn; ++i) w[static_cast<size_t>(i)] = c[static_cast<size_t>(i)][m];
  return w;
}

namespace {

/// Symmetric offsets -L..L sized for derivative order m at accuracy p.
int stencil_halfwidth(int order, int m) { return (order + m) / 2; }

struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;  // already divided by h^m
};

Stencil make_stencil(int order, int m, double h) {
  const int l = stencil_halfwidth(order, m);
  std::vector<double> nodes;
  std::vector<int> offsets;
  for (int o = -l; o <= l; ++o) {
    offsets.push_back(o);
    nodes.push_back(o * h);
  }
  Stencil s;
  s.offsets = std::move(offsets);
  s.weights = fd_weights(nodes, m);
  return s;
}

}  // namespace

FdProvider::FdProvider(int n, int rdim, MatrixFn f, int order, double step)
    : n_(n), rdim_(rdim), order_(order), steps_(static_cast<size_t>(rdim), step), f_(std::move(f)) {}

Mat FdProvider::deriv(const RVec& x, std::span<const int> multi) const {
  // Collect active axes and build the tensor-product stencil over them.
  std::vector<int> axes;
  std::vector<Stencil> stencils;
  for (int d = 0; d < rdim_; ++d) {
    const int m = d < static_cast<int>(multi.size()) ? multi[d] : 0;
    if (m == 0) continue;
    axes.push_back(d);
    stencils.push_back(make_stencil(order_, m, steps_[static_cast<size_t>(d)]));
  }
  if (axes.empty()) return f_(x);

  Mat acc = Mat::Zero(n_, n_);
  std::vector<size_t> idx(axes.size(), 0);
  RVec xs = x;
  while (true) {
    double w = 1.0;
    for (size_t a = 0; a < axes.size(); ++a) {
      const auto& st = stencils[a];
      w *= st.weights[idx[a]];
      xs[axes[a]] = x[axes[a]] + st.offsets[idx[a]] * steps_[static_cast<size_t>(axes[a])];
    }
    if (w != 0.0) acc += w * f_(xs);
    // advance the multi-counter
    size_t a = 0;
    while (a < axes.size()) {
      if (++idx[a] < stencils[a].offsets.size()) break;
      idx[a] = 0;
      ++a;
    }
    if (a == axes.size()) break;
  }
  return acc;
}

ScalarFdProvider::ScalarFdProvider(int rdim, ScalarFn f, int order, double step)
    : rdim_(rdim), order_(order), steps_(static_cast<size_t>(rdim), step), f_(std::move(f)) {}

double ScalarFdProvider::deriv(const RVec& x, std::span<const int> multi) const {
  std::vector<int> axes;
  std::vector<Stencil> stencils;
  for (int d = 0; d < rdim_; ++d) {
    const int m = d < static_cast<int>(multi.size()) ? multi[d] : 0;
    if (m == 0) continue;
    axes.push_back(d);
    stencils.push_back(make_stencil(order_, m, steps_[static_cast<size_t>(d)]));
  }
  if (axes.empty()) return f_(x);
  double acc = 0.0;
  std::vector<size_t> idx(axes.size(), 0);
  RVec xs = x;
  while (true) {
    double w = 1.0;
    for (size_t a = 0; a < axes.size(); ++a) {
      const auto& st = stencils[a];
      w *= st.weights[idx[a]];
      xs[axes[a]] = x[axes[a]] + st.offsets[idx[a]] * steps_[static_cast<size_t>(axes[a])];
    }
    if (w != 0.0) acc += w * f_(xs);
    size_t a = 0;
    while (a < axes.size()) {
      if (++idx[a] < stencils[a].offsets.size()) break;
      idx[a] = 0;
      ++a;
    }
    if (a == axes.size()) break;
  }
  return acc;
}

namespace {

/// Expand a product of Wirtinger factors into real mixed derivatives.
/// Each factor contributes (dx - i dy)/2 (unbarred) or (dx + i dy)/2 (barred).
template <typename Fn>
auto wirtinger_expand(int rdim, std::span<const int> dirs, std::span<const bool> barred, Fn&& real_deriv) {
  using R = decltype(real_deriv(std::declval<std::vector<int>&>()));
  const size_t nfac = dirs.size();
  R acc{};
  bool first = true;
  for (size_t mask = 0; mask < (size_t{1} << nfac); ++mask) {
    cplx w{1.0, 0.0};
    std::vector<int> multi(static_cast<size_t>(rdim), 0);
    for (size_t i = 0; i < nfac; ++i) {
      const bool takes_y = (mask >> i) & 1;
      const int axis = 2 * dirs[i] + (takes_y ? 1 : 0);
      multi[static_cast<size_t>(axis)] += 1;
      cplx fw{0.5, 0.0};
      if (takes_y) fw = barred[i] ? cplx{0.0, 0.5} : cplx{0.0, -0.5};
      w *= fw;
    }
    R term = real_deriv(multi);
    if (first) {
      acc = w * term;
      first = false;
    } else {
      acc += w * term;
    }
  }
  return acc;
}

}  // namespace

Mat complex_deriv(const DerivProvider& f, const RVec& x, std::span<const int> dirs,
                  std::span<const bool> barred) {
  return wirtinger_expand(f.rdim(), dirs, barred,
                          [&](std::vector<int>& multi) -> Mat { return f.deriv(x, multi); });
}

cplx complex_deriv_scalar(const ScalarFdProvider& f, const RVec& x, std::span<const int> dirs,
                          std::span<const bool> barred) {
  return wirtinger_expand(f.rdim(), dirs, barred,
                          [&](std::vector<int>& multi) -> cplx { return cplx{f.deriv(x, multi), 0.0}; });
}

}  // namespace conteq
