#pragma once

#include <functional>
#include <string>

#include "gnk/geometry.hpp"

namespace gnk::builtin {

/// Bounded test domain: the unit circle with `circles - 1` holes of radius
/// 0.25 sin(pi/k) on the ring |z| = 0.5; alpha = 0. For 3 circles the holes are
/// centered at +-0.5 with radius 0.25.
Domain example1_bounded(int circles = 3);

/// Unbounded test domain: a circle of radius 0.5 about 0 plus `circles - 1`
/// circles on the ring |z| = 1.5.
Domain example1_unbounded(int circles = 3);

/// Unit circle enclosing four holes of radius (2 - eps(2+2sqrt2))/(2+2sqrt2)
/// centered at +-(2-eps)/(2+2sqrt2) +- i(2-eps)/(2+2sqrt2); alpha = 0.
Domain example2_bounded(double eps);

/// Unbounded exterior of a center circle of radius sqrt2 - 1 - eps/2 and four
/// circles of radius 1 - eps/2 at +-1 +- i.
Domain example4_unbounded(double eps);

/// Interior of the square with vertices +-1 +- i, corners graded with parameter p.
Domain graded_square(int grading = 3);

/// Unit disc (single counterclockwise circle, alpha = 0).
Domain unit_disc();

/// Domain by name: example1-desk, example1-desk-unbounded, example2-bounded-5,
/// example4-unbounded-5, square-with-grading, unit-disc.
Domain by_name(const std::string& name, int circles, double eps, int grading);

/// f(z) = sin z + 1/(z - 2), analytic in the bounded test domains.
Complex example1_f_bounded(Complex z);
/// f(z) = 1/z - sin(1/z), analytic in the unbounded test domains with f(inf) = 0.
Complex example1_f_unbounded(Complex z);

/// theta_j = 2 j pi / m (theta_0 = 0 when m = 0).
std::vector<double> example1_theta(int components);

}  // namespace gnk::builtin
