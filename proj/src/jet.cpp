#include "conteq/jet.hpp"

namespace conteq {

MetricJet metric_jet(const DerivProvider& f, const RVec& x, int order_requested) {
  const int n = f.dim();
  MetricJet j;
  j.n = n;
  j.g = f.eval(x);
  j.d1.resize(static_cast<size_t>(n));
  j.d11.assign(static_cast<size_t>(n), std::vector<Mat>(static_cast<size_t>(n)));
  for (int a = 0; a < n; ++a) {
    const int dirs1[1] = {a};
    const bool bar1[1] = {false};
    j.d1[static_cast<size_t>(a)] = complex_deriv(f, x, dirs1, bar1);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int dirs2[2] = {a, b};
      const bool bar2[2] = {false, true};
      j.d11[static_cast<size_t>(a)][static_cast<size_t>(b)] = complex_deriv(f, x, dirs2, bar2);
    }
  if (order_requested >= 3) {
    j.has_third = true;
    j.d20.assign(static_cast<size_t>(n), std::vector<Mat>(static_cast<size_t>(n)));
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        const int dirs2[2] = {a, b};
        const bool bar2[2] = {false, false};
        Mat m = complex_deriv(f, x, dirs2, bar2);
        j.d20[static_cast<size_t>(a)][static_cast<size_t>(b)] = m;
        j.d20[static_cast<size_t>(b)][static_cast<size_t>(a)] = m;
      }
    j.d21.assign(static_cast<size_t>(n),
                 std::vector<std::vector<Mat>>(static_cast<size_t>(n), std::vector<Mat>(static_cast<size_t>(n))));
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          const int dirs3[3] = {a, b, c};
          const bool bar3[3] = {false, false, true};
          Mat m = complex_deriv(f, x, dirs3, bar3);
          j.d21[static_cast<size_t>(a)][static_cast<size_t>(b)][static_cast<size_t>(c)] = m;
          j.d21[static_cast<size_t>(b)][static_cast<size_t>(a)][static_cast<size_t>(c)] = m;
        }
  }
  return j;
}

ScalarJet scalar_jet(const ScalarFdProvider& f, const RVec& x) {
  // Number of complex directions is rdim/2 by the coordinate layout.
  const int n = f.rdim() / 2;
  ScalarJet j;
  j.n = n;
  j.v = f.eval(x);
  j.d1 = CVec::Zero(n);
  j.d11 = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const int dirs1[1] = {a};
    const bool bar1[1] = {false};
    j.d1[a] = complex_deriv_scalar(f, x, dirs1, bar1);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int dirs2[2] = {a, b};
      const bool bar2[2] = {false, true};
      j.d11(a, b) = complex_deriv_scalar(f, x, dirs2, bar2);
    }
  return j;
}

ScalarJet trace_scalar_jet(const MetricJet& chi, const MetricJet& omega) {
  const int n = chi.n;
  const Mat hi = chi.g.inverse();
  const Mat& g = omega.g;
  ScalarJet j;
  j.n = n;
  j.v = (hi * g).trace().real();
  j.d1 = CVec::Zero(n);
  j.d11 = Mat::Zero(n, n);

  // d_a (H^{-1}) = -H^{-1} (d_a H) H^{-1}; antiholomorphic via adjoints.
  std::vector<Mat> dhi(static_cast<size_t>(n)), dhib(static_cast<size_t>(n));
  for (int a = 0; a < n; ++a) {
    dhi[static_cast<size_t>(a)] = -hi * chi.d1[static_cast<size_t>(a)] * hi;
    dhib[static_cast<size_t>(a)] = -hi * chi.d1b(a) * hi;
  }
  for (int a = 0; a < n; ++a)
    j.d1[a] = (dhi[static_cast<size_t>(a)] * g + hi * omega.d1[static_cast<size_t>(a)]).trace();

  for (int a = 0; a < n; ++a) {
    const Mat& dah = chi.d1[static_cast<size_t>(a)];
    for (int b = 0; b < n; ++b) {
      const Mat dbh = chi.d1b(b);
      const Mat& dabh = chi.d11[static_cast<size_t>(a)][static_cast<size_t>(b)];
      // d_a d_bbar H^{-1}
      const Mat dab_hi = hi * dbh * hi * dah * hi - hi * dabh * hi + hi * dah * hi * dbh * hi;
      j.d11(a, b) = (dab_hi * g + dhi[static_cast<size_t>(a)] * omega.d1b(b) +
                     dhib[static_cast<size_t>(b)] * omega.d1[static_cast<size_t>(a)] +
                     hi * omega.d11[static_cast<size_t>(a)][static_cast<size_t>(b)])
                        .trace();
    }
  }
  return j;
}

}  // namespace conteq
