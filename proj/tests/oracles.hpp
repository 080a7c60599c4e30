#pragma once

// Test-only oracles, kept independent of the production computation paths.

#include <functional>
#include <vector>

#include "conteq/tensor.hpp"

namespace conteq::testing {

/// Brute-force wedge product of n (1,1)-forms by permutation expansion:
/// Theta_1 ^ ... ^ Theta_n = density * prod_j (i dz^j ^ dzbar^j), with
/// density = sum over sigma, tau of sgn(sigma) sgn(tau) prod_m M_m(tau(m), sigma(m)).
inline double wedge_density_oracle(const std::vector<Mat>& forms) {
  const int n = static_cast<int>(forms.size());
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;

  std::vector<std::vector<int>> perms;
  std::vector<int> signs;
  // enumerate permutations with parity
  std::function<void(std::vector<int>&, int)> gen = [&](std::vector<int>& p, int k) {
    if (k == n) {
      int inv = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (p[static_cast<size_t>(i)] > p[static_cast<size_t>(j)]) ++inv;
      perms.push_back(p);
      signs.push_back(inv % 2 == 0 ? 1 : -1);
      return;
    }
    for (int i = k; i < n; ++i) {
      std::swap(p[static_cast<size_t>(k)], p[static_cast<size_t>(i)]);
      gen(p, k + 1);
      std::swap(p[static_cast<size_t>(k)], p[static_cast<size_t>(i)]);
    }
  };
  gen(perm, 0);

  cplx total{0.0, 0.0};
  for (size_t s = 0; s < perms.size(); ++s)
    for (size_t t = 0; t < perms.size(); ++t) {
      cplx prod{static_cast<double>(signs[s] * signs[t]), 0.0};
      for (int m = 0; m < n; ++m)
        prod *= forms[static_cast<size_t>(m)](perms[t][static_cast<size_t>(m)],
                                              perms[s][static_cast<size_t>(m)]);
      total += prod;
    }
  return total.real();
}

}  // namespace conteq::testing
