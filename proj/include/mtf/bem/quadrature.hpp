#pragma once

#include <vector>

namespace mtf::bem {

/// Quadrature nodes and weights on [0, 1].
struct Rule {
  std::vector<double> x;
  std::vector<double> w;

  std::size_t size() const { return x.size(); }
};

/// n-point Gauss-Legendre rule on [0, 1].
Rule gauss_legendre(int n);

/// n-point Gauss rule for the weight -ln(x) on [0, 1]:
/// integral_0^1 -ln(x) f(x) dx ~ sum w_k f(x_k), exact for deg f < 2n.
Rule gauss_log(int n);

/// Cached rules; thread-safe after first use for a given n.
const Rule& cached_gauss_legendre(int n);
const Rule& cached_gauss_log(int n);

}  // namespace mtf::bem
