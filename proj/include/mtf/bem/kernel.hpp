#pragma once

#include <array>

namespace mtf::bem {

using Point2 = std::array<double, 2>;

/// Decaying fundamental solution of -Delta + a^2 in the plane:
/// G(r) = K0(a r) / (2 pi). Throws for r <= 0.
double kernel_2d(double a, double r);

/// Magnitude factor f(r) = a K1(a r) / (2 pi r), so grad G(z) = -f(|z|) z.
double kernel_gradient_factor(double a, double r);

/// d/dn(y) of G(x - y) = n(y) . grad_y G(x - y).
double kernel_normal_derivative(double a, const Point2& x, const Point2& y, const Point2& ny);

/// Splitting G(r) = log_coefficient(a r) * ln(r) + smooth_part(a, r) with
/// log_coefficient(z) = -I0(z) / (2 pi). The smooth part is even in r and
/// finite at r = 0.
double kernel_log_coefficient(double a, double r);
double kernel_smooth_part(double a, double r);

}  // namespace mtf::bem
