#include "gnk/builtin.hpp"

#include <cmath>

namespace gnk::builtin {

namespace {
constexpr auto ccw = Orientation::Counterclockwise;
constexpr auto cw = Orientation::Clockwise;
}  // namespace

Domain example1_bounded(int circles) {
  if (circles < 2) throw Error("example1-desk needs at least 2 circles");
  const int holes = circles - 1;
  const double r = holes == 1 ? 0.25 : 0.25 * std::sin(kPi / holes);
  std::vector<Curve> curves{Curve::circle(0.0, 1.0, ccw)};
  for (int k = 0; k < holes; ++k)
    curves.push_back(Curve::circle(0.5 * std::exp(kI * (kTwoPi * k / holes)), r, cw));
  return Domain::bounded(std::move(curves), 0.0);
}

Domain example1_unbounded(int circles) {
  if (circles < 1) throw Error("example1-desk-unbounded needs at least 1 circle");
  std::vector<Curve> curves{Curve::circle(0.0, 0.5, cw)};
  const int outer = circles - 1;
  const double r = outer <= 1 ? 0.5 : std::min(0.5, 0.75 * std::sin(kPi / outer));
  for (int k = 0; k < outer; ++k)
    curves.push_back(Curve::circle(1.5 * std::exp(kI * (kTwoPi * k / outer)), r, cw));
  return Domain::unbounded(std::move(curves));
}

Domain example2_bounded(double eps) {
  const double s = 2.0 + 2.0 * std::sqrt(2.0);
  const double r = (2.0 - eps * s) / s;
  const double c = (2.0 - eps) / s;
  if (!(eps > 0 && r > 0)) throw Error("example2-bounded-5: eps out of range");
  std::vector<Curve> curves{Curve::circle(0.0, 1.0, ccw)};
  for (const Complex center : {Complex(c, c), Complex(-c, c), Complex(-c, -c), Complex(c, -c)})
    curves.push_back(Curve::circle(center, r, cw));
  return Domain::bounded(std::move(curves), 0.0);
}

Domain example4_unbounded(double eps) {
  const double r0 = std::sqrt(2.0) - 1.0 - 0.5 * eps;
  if (!(eps > 0 && r0 > 0)) throw Error("example4-unbounded-5: eps out of range");
  std::vector<Curve> curves{Curve::circle(0.0, r0, cw)};
  for (const Complex center : {Complex(1, 1), Complex(-1, 1), Complex(-1, -1), Complex(1, -1)})
    curves.push_back(Curve::circle(center, 1.0 - 0.5 * eps, cw));
  return Domain::unbounded(std::move(curves));
}

Domain graded_square(int grading) {
  std::vector<Complex> v{{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
  return Domain::bounded({Curve::polygon(std::move(v), grading)}, 0.0);
}

Domain unit_disc() { return Domain::bounded({Curve::circle(0.0, 1.0, ccw)}, 0.0); }

Domain by_name(const std::string& name, int circles, double eps, int grading) {
  if (name == "example1-desk") return example1_bounded(circles);
  if (name == "example1-desk-unbounded") return example1_unbounded(circles);
  if (name == "example2-bounded-5") return example2_bounded(eps);
  if (name == "example4-unbounded-5") return example4_unbounded(eps);
  if (name == "square-with-grading") return graded_square(grading);
  if (name == "unit-disc") return unit_disc();
  throw Error("unknown built-in domain '" + name + "'");
}

Complex example1_f_bounded(Complex z) { return std::sin(z) + 1.0 / (z - 2.0); }

Complex example1_f_unbounded(Complex z) { return 1.0 / z - std::sin(1.0 / z); }

std::vector<double> example1_theta(int components) {
  const int m = components - 1;
  std::vector<double> theta(components, 0.0);
  for (int j = 1; j <= m; ++j) theta[j] = 2.0 * j * kPi / m;
  return theta;
}

}  // namespace gnk::builtin
