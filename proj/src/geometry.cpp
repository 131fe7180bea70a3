#include "gnk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gnk/grading.hpp"

namespace gnk {

double grading_omega(double t, int p) { return grading_omega_jet(t, p).v; }

Jet2 grading_omega_jet(double t, int p) {
  if (p < 2) throw Error("grading parameter p must be >= 2");
  constexpr double slack = 1e-12;
  if (!(t >= -slack && t <= kTwoPi + slack)) throw Error("grading_omega: t outside [0, 2pi]");
  return grading_omega_t(Jet2::variable(std::clamp(t, 0.0, kTwoPi)), p);
}

Jet2 grading_delta_jet(double t, int corner_count, int p) {
  if (corner_count < 1) throw Error("grading_delta: at least one corner required");
  if (!(t >= -1e-12 && t <= kTwoPi + 1e-12)) throw Error("grading_delta: t outside [0, 2pi]");
  const double piece = kTwoPi / corner_count;
  const int k = std::clamp(static_cast<int>(std::floor(t / piece)), 0, corner_count - 1);
  const double c = k * piece;
  const double arg = std::clamp(corner_count * (t - c), 0.0, kTwoPi);
  const Jet2 w = grading_omega_jet(arg, p);
  return {w.v / corner_count + c, w.d1, corner_count * w.d2};
}

double grading_delta(double t, int corner_count, int p) {
  return grading_delta_jet(t, corner_count, p).v;
}

int equispaced_corner_count(const std::vector<double>& corners) {
  const int count = static_cast<int>(corners.size());
  if (count == 0) throw Error("corner list is empty");
  for (int k = 0; k < count; ++k) {
    const double expected = k * kTwoPi / count;
    if (std::abs(corners[k] - expected) > 1e-12)
      throw Error("corners must be equally spaced at (k-1) 2pi / p_j");
  }
  return count;
}

// ---------------------------------------------------------------------------

Curve::Curve(Evaluator zeta, int corner_count, int grading)
    : zeta_(std::move(zeta)), corner_count_(corner_count), grading_(grading) {
  if (corner_count_ < 0) throw Error("corner count must be non-negative");
  if (corner_count_ > 0 && grading_ < 2)
    throw Error("curves with corners need a grading parameter p >= 2");
}

Curve Curve::circle(Complex center, double radius, Orientation orientation) {
  if (!(radius > 0)) throw Error("circle radius must be positive");
  const double sgn = orientation == Orientation::Counterclockwise ? 1.0 : -1.0;
  return Curve(
      [=](double t) {
        const Complex e = radius * std::exp(kI * (sgn * t));
        return CurvePoint{center + e, kI * sgn * e, -e};
      },
      0, 0);
}

Curve Curve::ellipse(Complex center, double semi_a, double semi_b, double angle,
                     Orientation orientation) {
  if (!(semi_a > 0 && semi_b > 0)) throw Error("ellipse semi-axes must be positive");
  const Complex rot = std::exp(kI * angle);
  const double sgn = orientation == Orientation::Counterclockwise ? 1.0 : -1.0;
  return Curve(
      [=](double t) {
        const double c = std::cos(t), s = std::sin(t);
        return CurvePoint{center + rot * Complex(semi_a * c, sgn * semi_b * s),
                          rot * Complex(-semi_a * s, sgn * semi_b * c),
                          rot * Complex(-semi_a * c, -sgn * semi_b * s)};
      },
      0, 0);
}

Curve Curve::trig_series(int min_mode, std::vector<Complex> coeffs) {
  if (coeffs.empty()) throw Error("trigonometric curve needs at least one coefficient");
  return Curve(
      [=, c = std::move(coeffs)](double t) {
        CurvePoint pt{0.0, 0.0, 0.0};
        for (std::size_t k = 0; k < c.size(); ++k) {
          const double mode = static_cast<double>(min_mode + static_cast<int>(k));
          const Complex term = c[k] * std::exp(kI * (mode * t));
          pt.z += term;
          pt.dz += kI * mode * term;
          pt.d2z -= mode * mode * term;
        }
        return pt;
      },
      0, 0);
}

Curve Curve::polygon(std::vector<Complex> vertices, int grading) {
  const int count = static_cast<int>(vertices.size());
  if (count < 3) throw Error("polygon needs at least 3 vertices");
  for (int k = 0; k < count; ++k)
    if (vertices[k] == vertices[(k + 1) % count]) throw Error("polygon has a repeated vertex");
  return Curve(
      [v = std::move(vertices), count](double s) {
        const double scaled = s * count / kTwoPi;
        const int k = std::clamp(static_cast<int>(std::floor(scaled)), 0, count - 1);
        const double u = scaled - k;
        const Complex edge = v[(k + 1) % count] - v[k];
        return CurvePoint{v[k] + u * edge, edge * (count / kTwoPi), 0.0};
      },
      count, grading);
}

Curve Curve::custom(Evaluator zeta, int corner_count, int grading) {
  if (!zeta) throw Error("custom curve needs an evaluator");
  return Curve(std::move(zeta), corner_count, grading);
}

CurvePoint Curve::eval(double t) const {
  if (corner_count_ == 0) return zeta_(t);
  const Jet2 d = grading_delta_jet(t, corner_count_, grading_);
  const CurvePoint z = zeta_(d.v);
  return {z.z, z.dz * d.d1, z.d2z * (d.d1 * d.d1) + z.dz * d.d2};
}

std::vector<double> Curve::corners() const {
  std::vector<double> c(corner_count_);
  for (int k = 0; k < corner_count_; ++k) c[k] = k * kTwoPi / corner_count_;
  return c;
}

Curve Curve::reversed() const {
  return Curve(
      [z = zeta_](double s) {
        const CurvePoint p = z(kTwoPi - s);
        return CurvePoint{p.z, -p.dz, p.d2z};
      },
      corner_count_, grading_);
}

double signed_area(const Curve& curve, int samples) {
  double acc = 0.0;
  for (int p = 0; p < samples; ++p) {
    const CurvePoint pt = curve.eval(p * kTwoPi / samples);
    acc += (std::conj(pt.z) * pt.dz).imag();
  }
  return 0.5 * acc * kTwoPi / samples;
}

// ---------------------------------------------------------------------------

Domain::Domain(DomainKind kind, std::vector<Curve> curves, std::optional<Complex> alpha)
    : kind_(kind), curves_(std::move(curves)), alpha_(alpha) {
  if (curves_.empty()) throw Error("domain needs at least one boundary curve");
  orientation_.reserve(curves_.size());
  for (std::size_t j = 0; j < curves_.size(); ++j) {
    const double area = signed_area(curves_[j]);
    if (area == 0.0 || !std::isfinite(area))
      throw Error("curve " + std::to_string(j) + " encloses no area");
    const Orientation o = area > 0 ? Orientation::Counterclockwise : Orientation::Clockwise;
    const Orientation want = (kind_ == DomainKind::Bounded && j == 0)
                                 ? Orientation::Counterclockwise
                                 : Orientation::Clockwise;
    if (o != want)
      throw Error("curve " + std::to_string(j) + " must be oriented " +
                  (want == Orientation::Counterclockwise ? "counterclockwise" : "clockwise") +
                  " (domain on the left)");
    orientation_.push_back(o);
  }
}

Domain Domain::bounded(std::vector<Curve> curves, Complex alpha) {
  return Domain(DomainKind::Bounded, std::move(curves), alpha);
}

Domain Domain::unbounded(std::vector<Curve> curves) {
  return Domain(DomainKind::Unbounded, std::move(curves), std::nullopt);
}

// ---------------------------------------------------------------------------

bool DiscreteBoundary::has_corner_nodes() const {
  return std::find(corner_node.begin(), corner_node.end(), true) != corner_node.end();
}

DiscreteBoundary discretize(const Domain& domain, int n) {
  if (n % 2 != 0) throw Error("n must be even");
  if (n < 4) throw Error("n must be at least 4");

  DiscreteBoundary d;
  d.n = n;
  d.components = domain.component_count();
  const Index total = static_cast<Index>(d.components) * n;
  d.t.resize(total);
  d.eta.resize(total);
  d.etap.resize(total);
  d.etapp.resize(total);
  d.corner_node.assign(total, false);

  for (int k = 0; k < d.components; ++k) {
    const Curve& curve = domain.curve(k);
    double scale = 0.0;
    for (int p = 0; p < n; ++p) {
      const Index i = static_cast<Index>(k) * n + p;
      const double t = p * kTwoPi / n;
      const CurvePoint pt = curve.eval(t);
      d.t[i] = t;
      d.eta[i] = pt.z;
      d.etap[i] = pt.dz;
      d.etapp[i] = pt.d2z;
      scale = std::max(scale, std::abs(pt.dz));
      if (curve.has_corners()) {
        const double pos = t * curve.corner_count() / kTwoPi;
        d.corner_node[i] = std::abs(pos - std::round(pos)) < 1e-12;
      }
    }
    for (int p = 0; p < n; ++p) {
      const Index i = static_cast<Index>(k) * n + p;
      if (!std::isfinite(std::abs(d.eta[i])) || !std::isfinite(std::abs(d.etapp[i])))
        throw Error("non-finite boundary sample on curve " + std::to_string(k));
      if (!d.corner_node[i] && !(std::abs(d.etap[i]) > 1e-14 * scale))
        throw Error("zero derivative eta' at a non-corner node of curve " + std::to_string(k));
    }
  }
  return d;
}

Complex discrete_winding_number(const DiscreteBoundary& disc, Complex z) {
  Complex acc = 0.0;
  for (Index i = 0; i < disc.size(); ++i) acc += disc.etap[i] / (disc.eta[i] - z);
  return acc * (kTwoPi / disc.n) / (kTwoPi * kI);
}

double boundary_diameter(const DiscreteBoundary& disc) {
  const Vector x = disc.eta.real();
  const Vector y = disc.eta.imag();
  return std::hypot(x.maxCoeff() - x.minCoeff(), y.maxCoeff() - y.minCoeff());
}

PiecewiseConstant PiecewiseConstant::constant(int components, double value) {
  return {std::vector<double>(components, value)};
}

Vector PiecewiseConstant::expand(int n) const {
  Vector v(static_cast<Index>(values.size()) * n);
  for (std::size_t k = 0; k < values.size(); ++k)
    v.segment(static_cast<Index>(k) * n, n).setConstant(values[k]);
  return v;
}

}  // namespace gnk
