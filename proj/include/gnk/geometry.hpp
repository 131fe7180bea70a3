#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gnk/types.hpp"

namespace gnk {

/// Boundary sample eta(t) with its first two parameter derivatives.
struct CurvePoint {
  Complex z;
  Complex dz;
  Complex d2z;
};

enum class Orientation { Counterclockwise, Clockwise };

/// One closed boundary curve parametrized on [0, 2pi).
///
/// Curves with corners are stored as a piecewise smooth parametrization
/// zeta composed with the grading map, eta(t) = zeta(delta(t)), so that the
/// equidistant node layout serves smooth and non-smooth boundaries alike.
class Curve {
 public:
  using Evaluator = std::function<CurvePoint(double)>;

  static Curve circle(Complex center, double radius, Orientation orientation);
  static Curve ellipse(Complex center, double semi_a, double semi_b, double angle,
                       Orientation orientation);

  /// eta(t) = sum_k coeffs[k] * exp(i * (k + min_mode) * t).
  static Curve trig_series(int min_mode, std::vector<Complex> coeffs);

  /// Closed polygon through `vertices` in the given order. Vertex k sits at
  /// parameter (k-1) 2pi / p_j and the curve is graded with parameter `grading`.
  static Curve polygon(std::vector<Complex> vertices, int grading);

  /// Wraps a user evaluator. `corner_count` > 0 requires `grading` >= 2 and
  /// corners of zeta at equally spaced parameters.
  static Curve custom(Evaluator zeta, int corner_count = 0, int grading = 0);

  CurvePoint eval(double t) const;

  int corner_count() const { return corner_count_; }
  int grading() const { return grading_; }
  bool has_corners() const { return corner_count_ > 0; }
  /// Corner preimages c_k = (k-1) 2pi / p_j.
  std::vector<double> corners() const;

  /// Returns the same geometric curve traversed in the opposite direction.
  Curve reversed() const;

 private:
  Curve(Evaluator zeta, int corner_count, int grading);

  Evaluator zeta_;
  int corner_count_ = 0;
  int grading_ = 0;
};

enum class DomainKind { Bounded, Unbounded };

/// Multiply connected domain with boundary curves Gamma_0..Gamma_m. The domain
/// lies to the left of every curve: a bounded domain has a counterclockwise
/// outer curve (index 0) and clockwise holes, an unbounded one has only
/// clockwise curves.
class Domain {
 public:
  static Domain bounded(std::vector<Curve> curves, Complex alpha);
  static Domain unbounded(std::vector<Curve> curves);

  DomainKind kind() const { return kind_; }
  bool is_bounded() const { return kind_ == DomainKind::Bounded; }
  const std::optional<Complex>& alpha() const { return alpha_; }
  const std::vector<Curve>& curves() const { return curves_; }
  const Curve& curve(std::size_t j) const { return curves_.at(j); }
  /// Number of curves, m + 1.
  int component_count() const { return static_cast<int>(curves_.size()); }
  Orientation orientation(std::size_t j) const { return orientation_.at(j); }

 private:
  Domain(DomainKind kind, std::vector<Curve> curves, std::optional<Complex> alpha);

  DomainKind kind_;
  std::vector<Curve> curves_;
  std::optional<Complex> alpha_;
  std::vector<Orientation> orientation_;
};

/// Signed area enclosed by a curve, positive for counterclockwise traversal.
double signed_area(const Curve& curve, int samples = 512);

/// Nodes t_{kn+p} = (p-1) 2pi / n on every component and the boundary samples.
struct DiscreteBoundary {
  int n = 0;
  int components = 0;
  Vector t;
  CVector eta;
  CVector etap;
  CVector etapp;
  /// True where the node is a corner preimage of a graded curve (eta' = 0).
  std::vector<bool> corner_node;

  Index size() const { return eta.size(); }
  int component_of(Index i) const { return static_cast<int>(i / n); }
  bool has_corner_nodes() const;
};

DiscreteBoundary discretize(const Domain& domain, int n);

/// Discrete winding number (1/2 pi i) sum_j (2pi/n) eta'_j / (eta_j - z) over all
/// components. Close to 1 for z inside a bounded domain.
Complex discrete_winding_number(const DiscreteBoundary& disc, Complex z);

/// Diameter of the node set's bounding box.
double boundary_diameter(const DiscreteBoundary& disc);

/// Real piecewise constant function h = (h_0, ..., h_m).
struct PiecewiseConstant {
  std::vector<double> values;

  static PiecewiseConstant constant(int components, double value);
  int size() const { return static_cast<int>(values.size()); }
  double operator[](std::size_t k) const { return values[k]; }
  /// Expands to one value per node.
  Vector expand(int n) const;
};

}  // namespace gnk
