#pragma once

#include <memory>
#include <vector>

#include "conteq/jet.hpp"
#include "conteq/tensor.hpp"

namespace conteq {

/// Square periodic grid with two sample axes of extent N over [0, 2pi).
/// Two coordinate interpretations are supported:
///   full mode (n = 1): axes are (x, y) of the single complex coordinate;
///   re-slice mode (n = 2): axes are (Re z_1, Re z_2) and fields are constant
///   in the imaginary parts, which keeps an n = 2 torus desk-scale.
struct TorusGrid {
  int n_complex = 1;
  int N = 64;
  bool re_slice = false;

  size_t size() const { return static_cast<size_t>(N) * N; }
  double spacing() const;
  size_t index(int i0, int i1) const { return static_cast<size_t>(i0) * N + i1; }
};

using ScalarField = std::vector<double>;
using ComplexField = std::vector<cplx>;

/// FFT differentiation on a TorusGrid (plans cached per instance; plan setup
/// uses FFTW_ESTIMATE so results do not depend on measurement runs).
class SpectralOps {
 public:
  explicit SpectralOps(const TorusGrid& grid);
  ~SpectralOps();
  SpectralOps(const SpectralOps&) = delete;
  SpectralOps& operator=(const SpectralOps&) = delete;

  const TorusGrid& grid() const { return grid_; }

  /// d^order/dx_axis^order along grid axis 0 or 1.
  ComplexField axis_deriv(const ComplexField& f, int axis, int order = 1) const;
  ScalarField axis_deriv(const ScalarField& f, int axis, int order = 1) const;

  /// Complex-coordinate derivatives under the grid's coordinate
  /// interpretation. dir indexes the complex coordinate.
  ComplexField dz(const ComplexField& f, int dir) const;
  ComplexField dzb(const ComplexField& f, int dir) const;
  ComplexField ddbar(const ScalarField& f, int dir_hol, int dir_antihol) const;

  /// Fourier-space solve of (1 - t * sum_{ab} m(a,b) d_a d_bbar) x = rhs for a
  /// constant Hermitian coefficient matrix m (the Newton preconditioner).
  ScalarField solve_const_helmholtz(const ScalarField& rhs, const Mat& m, double t) const;

 private:
  struct Impl;
  TorusGrid grid_;
  std::unique_ptr<Impl> impl_;
};

/// Hermitian-matrix-valued field on a TorusGrid, stored as n x n entry grids.
struct MatrixGridField {
  TorusGrid grid;
  int n = 1;
  std::vector<ComplexField> entries;  // (k, j) row-major: entry k*n+j is g_{kbar j}

  Mat at(size_t idx) const;
  void set(size_t idx, const Mat& m);
  static MatrixGridField constant(const TorusGrid& grid, const Mat& m);
};

/// Pointwise jets of a matrix grid field, all derivatives spectral.
class GridJetField {
 public:
  GridJetField(const SpectralOps& ops, const MatrixGridField& f, int order);
  MetricJet at(size_t idx) const;

 private:
  const TorusGrid grid_;
  int n_;
  int order_;
  std::vector<ComplexField> g_, d1_, d11_;  // flattened entry grids
};

}  // namespace conteq
