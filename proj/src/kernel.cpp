#include "mtf/bem/kernel.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "mtf/errors.hpp"

namespace mtf::bem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check(double a, double r) {
  if (!(a > 0.0)) throw InvalidArgument("bem2d", "kernel requires a > 0");
  if (!(r > 0.0)) throw InvalidArgument("bem2d", "kernel evaluated at r = 0");
}

double bessel_i0(double z) { return boost::math::cyl_bessel_i(0, z); }

}  // namespace

double kernel_2d(double a, double r) {
  check(a, r);
  return boost::math::cyl_bessel_k(0, a * r) / kTwoPi;
}

double kernel_gradient_factor(double a, double r) {
  check(a, r);
  return a * boost::math::cyl_bessel_k(1, a * r) / (kTwoPi * r);
}

double kernel_normal_derivative(double a, const Point2& x, const Point2& y, const Point2& ny) {
  const double dx = x[0] - y[0];
  const double dy = x[1] - y[1];
  const double r = std::hypot(dx, dy);
  return kernel_gradient_factor(a, r) * (dx * ny[0] + dy * ny[1]);
}

double kernel_log_coefficient(double a, double r) {
  return -bessel_i0(a * r) / kTwoPi;
}

double kernel_smooth_part(double a, double r) {
  if (!(a > 0.0)) throw InvalidArgument("bem2d", "kernel requires a > 0");
  const double z = a * r;
  if (z > 2.0) {
    return kernel_2d(a, r) + bessel_i0(z) * std::log(r) / kTwoPi;
  }
  // K0(z) = -(ln(z/2) + gamma) I0(z) + sum_{k>=1} (z^2/4)^k H_k / (k!)^2
  const double q = 0.25 * z * z;
  double term = 1.0;  // (z^2/4)^k / (k!)^2
  double harmonic = 0.0;
  double i0 = 1.0;
  double tail = 0.0;
  for (int k = 1; k < 40; ++k) {
    term *= q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    i0 += term;
    tail += term * harmonic;
    if (term < 1e-18 * i0) break;
  }
  return (-(std::log(0.5 * a) + std::numbers::egamma) * i0 + tail) / kTwoPi;
}

}  // namespace mtf::bem
