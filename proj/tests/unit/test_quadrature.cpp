#include <doctest.h>

#include <cmath>

#include "mtf/bem/quadrature.hpp"
#include "mtf/errors.hpp"

using namespace mtf::bem;

namespace {

double apply(const Rule& r, auto f) {
  double s = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) s += r.w[k] * f(r.x[k]);
  return s;
}

}  // namespace

TEST_CASE("gauss_legendre is exact to degree 2n-1") {
  for (int n : {1, 2, 5, 8, 16, 24}) {
    const auto r = gauss_legendre(n);
    REQUIRE(r.size() == std::size_t(n));
    for (int k = 0; k < 2 * n; ++k) {
      const double v = apply(r, [k](double x) { return std::pow(x, k); });
      CHECK(std::abs(v - 1.0 / (k + 1)) < 1e-14);
    }
    for (double x : r.x) {
      CHECK(x > 0.0);
      CHECK(x < 1.0);
    }
  }
}

TEST_CASE("gauss_log is exact to degree 2n-1 for the -ln weight") {
  for (int n : {1, 2, 4, 8, 16}) {
    const auto r = gauss_log(n);
    REQUIRE(r.size() == std::size_t(n));
    for (int k = 0; k < 2 * n; ++k) {
      const double v = apply(r, [k](double x) { return std::pow(x, k); });
      CHECK(std::abs(v - 1.0 / ((k + 1.0) * (k + 1.0))) < 1e-13);
    }
  }
  // smooth non-polynomial integrand: int_0^1 -ln(x) cos(x) dx = Si(1)
  const double v = apply(gauss_log(12), [](double x) { return std::cos(x); });
  CHECK(std::abs(v - 0.946083070367183) < 1e-14);
}

TEST_CASE("cached rules and bad orders") {
  const auto& a = cached_gauss_legendre(6);
  const auto& b = cached_gauss_legendre(6);
  CHECK(&a == &b);
  CHECK(cached_gauss_log(5).size() == 5);
  CHECK_THROWS_AS(gauss_legendre(0), mtf::InvalidArgument);
  CHECK_THROWS_AS(gauss_log(0), mtf::InvalidArgument);
}
