#pragma once

// Kress-type grading maps for boundaries with corners. The functions are
// templated on the scalar so they can be evaluated on Jet2 to obtain exact
// first and second derivatives.

#include <cmath>
#include <vector>

#include "gnk/types.hpp"

namespace gnk {

/// Truncated second-order Taylor jet: value, first and second derivative.
struct Jet2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static Jet2 variable(double x) { return {x, 1.0, 0.0}; }
  static Jet2 constant(double x) { return {x, 0.0, 0.0}; }
};

inline Jet2 operator+(Jet2 a, Jet2 b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet2 operator-(Jet2 a, Jet2 b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
inline Jet2 operator-(Jet2 a) { return {-a.v, -a.d1, -a.d2}; }
inline Jet2 operator*(Jet2 a, Jet2 b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
inline Jet2 operator/(Jet2 a, Jet2 b) {
  const double q = a.v / b.v;
  const double q1 = (a.d1 - q * b.d1) / b.v;
  const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
  return {q, q1, q2};
}
inline Jet2 operator*(double s, Jet2 a) { return {s * a.v, s * a.d1, s * a.d2}; }
inline Jet2 operator+(Jet2 a, double s) { return {a.v + s, a.d1, a.d2}; }
inline Jet2 operator+(double s, Jet2 a) { return a + s; }
inline Jet2 operator-(double s, Jet2 a) { return {s - a.v, -a.d1, -a.d2}; }

namespace detail {

template <typename T>
T ipow(T x, int p) {
  T r = x;
  for (int i = 1; i < p; ++i) r = r * x;
  return r;
}

}  // namespace detail

/// Cubic auxiliary polynomial v(t) of the grading map; v(0)=0, v(pi)=1/2, v(2pi)=1.
template <typename T>
T grading_v(T t, int p) {
  const double a = 1.0 / p - 0.5;
  const T u = (1.0 / kPi) * (kPi - t);
  return a * (u * u * u) + (1.0 / p) * (-1.0 * u) + 0.5;
}

template <typename T>
T grading_omega_t(T t, int p) {
  const T a = detail::ipow(grading_v(t, p), p);
  const T b = detail::ipow(grading_v(kTwoPi - t, p), p);
  return kTwoPi * (a / (a + b));
}

/// omega(t) for t in [0, 2pi], grading parameter p >= 2.
double grading_omega(double t, int p);

/// omega together with its first two derivatives.
Jet2 grading_omega_jet(double t, int p);

/// Piecewise grading map delta(t) for `corner_count` corners equally spaced
/// at c_k = (k-1) 2pi / corner_count; returns value and two derivatives.
Jet2 grading_delta_jet(double t, int corner_count, int p);

double grading_delta(double t, int corner_count, int p);

/// Validates an explicit corner list against the equal-spacing requirement
/// and returns the corner count. Throws gnk::Error otherwise.
int equispaced_corner_count(const std::vector<double>& corners);

}  // namespace gnk
