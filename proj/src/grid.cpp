#include "conteq/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace conteq {

double TorusGrid::spacing() const { return 2.0 * std::numbers::pi / N; }

struct SpectralOps::Impl {
  int N;
  fftw_plan fwd = nullptr, bwd = nullptr;
  std::vector<cplx> buf;
  std::vector<double> freq;  // integer wavenumbers per index

  explicit Impl(int n) : N(n), buf(static_cast<size_t>(n) * n) {
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fwd = fftw_plan_dft_2d(N, N, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_2d(N, N, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    freq.resize(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) freq[static_cast<size_t>(i)] = i <= N / 2 ? i : i - N;
    if (N % 2 == 0) freq[static_cast<size_t>(N) / 2] = 0.0;  // drop the unmatched Nyquist mode
  }
  ~Impl() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
};

SpectralOps::SpectralOps(const TorusGrid& grid) : grid_(grid), impl_(new Impl(grid.N)) {}
SpectralOps::~SpectralOps() = default;

ComplexField SpectralOps::axis_deriv(const ComplexField& f, int axis, int order) const {
  const int N = grid_.N;
  auto& buf = impl_->buf;
  buf = f;
  fftw_execute(impl_->fwd);
  const double inv = 1.0 / (static_cast<double>(N) * N);
  for (int i0 = 0; i0 < N; ++i0)
    for (int i1 = 0; i1 < N; ++i1) {
      const double k = impl_->freq[static_cast<size_t>(axis == 0 ? i0 : i1)];
      cplx m = std::pow(cplx{0.0, k}, order);
      buf[grid_.index(i0, i1)] *= m * inv;
    }
  fftw_execute(impl_->bwd);
  return buf;
}

ScalarField SpectralOps::axis_deriv(const ScalarField& f, int axis, int order) const {
  ComplexField c(f.size());
  for (size_t i = 0; i < f.size(); ++i) c[i] = f[i];
  c = axis_deriv(c, axis, order);
  ScalarField out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = c[i].real();
  return out;
}

ComplexField SpectralOps::dz(const ComplexField& f, int dir) const {
  if (grid_.re_slice) {
    // z_dir = x_dir + i y_dir with no y dependence: d_z = (1/2) d/dx_dir.
    ComplexField d = axis_deriv(f, dir, 1);
    for (auto& v : d) v *= 0.5;
    return d;
  }
  // full mode: single complex coordinate on axes (x, y)
  ComplexField dx = axis_deriv(f, 0, 1);
  ComplexField dy = axis_deriv(f, 1, 1);
  ComplexField out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = 0.5 * (dx[i] - cplx{0.0, 1.0} * dy[i]);
  return out;
}

ComplexField SpectralOps::dzb(const ComplexField& f, int dir) const {
  if (grid_.re_slice) {
    ComplexField d = axis_deriv(f, dir, 1);
    for (auto& v : d) v *= 0.5;
    return d;
  }
  ComplexField dx = axis_deriv(f, 0, 1);
  ComplexField dy = axis_deriv(f, 1, 1);
  ComplexField out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = 0.5 * (dx[i] + cplx{0.0, 1.0} * dy[i]);
  return out;
}

ComplexField SpectralOps::ddbar(const ScalarField& f, int a, int b) const {
  ComplexField c(f.size());
  for (size_t i = 0; i < f.size(); ++i) c[i] = f[i];
  if (grid_.re_slice) {
    ComplexField d = (a == b) ? axis_deriv(c, a, 2) : axis_deriv(axis_deriv(c, a, 1), b, 1);
    for (auto& v : d) v *= 0.25;
    return d;
  }
  // n = 1: d_z d_zbar = (dxx + dyy)/4
  ComplexField dxx = axis_deriv(c, 0, 2);
  ComplexField dyy = axis_deriv(c, 1, 2);
  ComplexField out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = 0.25 * (dxx[i] + dyy[i]);
  return out;
}

ScalarField SpectralOps::solve_const_helmholtz(const ScalarField& rhs, const Mat& m, double t) const {
  const int N = grid_.N;
  auto& buf = impl_->buf;
  buf.assign(rhs.size(), cplx{0.0, 0.0});
  for (size_t i = 0; i < rhs.size(); ++i) buf[i] = rhs[i];
  fftw_execute(impl_->fwd);
  const double inv = 1.0 / (static_cast<double>(N) * N);
  const int nc = grid_.n_complex;
  for (int i0 = 0; i0 < N; ++i0)
    for (int i1 = 0; i1 < N; ++i1) {
      const double k0 = impl_->freq[static_cast<size_t>(i0)];
      const double k1 = impl_->freq[static_cast<size_t>(i1)];
      // symbol of sum_{ab} m(a,b) d_a d_bbar on this mode
      cplx sym{0.0, 0.0};
      if (grid_.re_slice) {
        const double ks[2] = {k0, k1};
        for (int a = 0; a < nc; ++a)
          for (int b = 0; b < nc; ++b)
            sym += m(a, b) * (cplx{0.0, 0.5} * ks[a]) * (cplx{0.0, -0.5} * ks[b]);
      } else {
        sym = m(0, 0) * (-0.25) * (k0 * k0 + k1 * k1);
      }
      buf[grid_.index(i0, i1)] *= inv / (1.0 - t * sym.real());
    }
  fftw_execute(impl_->bwd);
  ScalarField out(rhs.size());
  for (size_t i = 0; i < rhs.size(); ++i) out[i] = buf[i].real();
  return out;
}

Mat MatrixGridField::at(size_t idx) const {
  Mat m(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) m(k, j) = entries[static_cast<size_t>(k) * n + j][idx];
  return m;
}

void MatrixGridField::set(size_t idx, const Mat& m) {
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) entries[static_cast<size_t>(k) * n + j][idx] = m(k, j);
}

MatrixGridField MatrixGridField::constant(const TorusGrid& grid, const Mat& m) {
  MatrixGridField f;
  f.grid = grid;
  f.n = static_cast<int>(m.rows());
  f.entries.assign(static_cast<size_t>(f.n) * f.n, ComplexField(grid.size()));
  for (int k = 0; k < f.n; ++k)
    for (int j = 0; j < f.n; ++j)
      f.entries[static_cast<size_t>(k) * f.n + j].assign(grid.size(), m(k, j));
  return f;
}

GridJetField::GridJetField(const SpectralOps& ops, const MatrixGridField& f, int order)
    : grid_(f.grid), n_(f.n), order_(order) {
  if (order != 2) throw std::invalid_argument("GridJetField supports order 2");
  const int n = n_;
  g_ = f.entries;
  d1_.resize(static_cast<size_t>(n) * n * n);
  d11_.resize(static_cast<size_t>(n) * n * n * n);
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        const auto& e = f.entries[static_cast<size_t>(k) * n + j];
        d1_[(static_cast<size_t>(a) * n + k) * n + j] = ops.dz(e, a);
      }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
          const auto& e = f.entries[static_cast<size_t>(k) * n + j];
          d11_[((static_cast<size_t>(a) * n + b) * n + k) * n + j] = ops.dzb(ops.dz(e, a), b);
        }
}

MetricJet GridJetField::at(size_t idx) const {
  const int n = n_;
  MetricJet j;
  j.n = n;
  j.g = Mat(n, n);
  j.d1.assign(static_cast<size_t>(n), Mat(n, n));
  j.d11.assign(static_cast<size_t>(n), std::vector<Mat>(static_cast<size_t>(n), Mat(n, n)));
  for (int k = 0; k < n; ++k)
    for (int jj = 0; jj < n; ++jj) {
      j.g(k, jj) = g_[static_cast<size_t>(k) * n + jj][idx];
      for (int a = 0; a < n; ++a)
        j.d1[static_cast<size_t>(a)](k, jj) = d1_[(static_cast<size_t>(a) * n + k) * n + jj][idx];
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          j.d11[static_cast<size_t>(a)][static_cast<size_t>(b)](k, jj) =
              d11_[((static_cast<size_t>(a) * n + b) * n + k) * n + jj][idx];
    }
  return j;
}

}  // namespace conteq
