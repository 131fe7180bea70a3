#include <doctest.h>

#include <cmath>
#include <random>

#include <gnk/builtin.hpp>
#include <gnk/kernels.hpp>

using namespace gnk;

namespace {

struct Setup {
  DiscreteBoundary disc;
  AuxiliaryFunction aux;
};

Setup circle_setup(int n) {
  const auto dom = builtin::unit_disc();
  auto disc = discretize(dom, n);
  auto aux = build_A(dom, disc, PiecewiseConstant::constant(1, kPi / 2));
  return {std::move(disc), std::move(aux)};
}

Setup three_circles(int n, PiecewiseConstant theta = PiecewiseConstant::constant(3, kPi / 2)) {
  const auto dom = builtin::example1_bounded(3);
  auto disc = discretize(dom, n);
  auto aux = build_A(dom, disc, theta);
  return {std::move(disc), std::move(aux)};
}

}  // namespace

TEST_CASE("A on the unit disc and in the unbounded case") {
  const auto s = circle_setup(16);
  for (Index i = 0; i < 16; ++i) {
    CHECK(std::abs(s.aux.A[i] - s.disc.eta[i]) < 1e-15);
    CHECK(std::abs(s.aux.Ap[i] - s.disc.etap[i]) < 1e-15);
  }
  const auto dom = builtin::example1_unbounded(3);
  const auto disc = discretize(dom, 16);
  const auto aux = build_A(dom, disc, PiecewiseConstant::constant(3, 0.0));
  for (Index i = 0; i < disc.size(); ++i) {
    CHECK(std::abs(aux.A[i] - kI) < 1e-15);
    CHECK(aux.Ap[i] == Complex(0.0));
  }
}

TEST_CASE("build_A validation") {
  const auto dom = builtin::example1_bounded(3);
  const auto disc = discretize(dom, 32);
  CHECK_THROWS_AS(build_A(dom, disc, PiecewiseConstant::constant(2, 0.0)), Error);
  const auto outer = Curve::circle(0.0, 1.0, Orientation::Counterclockwise);
  const auto on_boundary = Domain::bounded({outer}, 1.0);
  const auto d1 = discretize(on_boundary, 32);
  CHECK_THROWS_AS(build_A(on_boundary, d1, PiecewiseConstant::constant(1, 0.0)), Error);
  const auto outside = Domain::bounded({outer}, 3.0);
  const auto d2 = discretize(outside, 32);
  CHECK_THROWS_AS(build_A(outside, d2, PiecewiseConstant::constant(1, 0.0)), Error);
}

TEST_CASE("circle kernel values in closed form") {
  const int n = 40;
  const auto s = circle_setup(n);
  const KernelEvaluator k(s.disc, s.aux);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Index a = pick(rng), b = pick(rng);
    if (a == b) continue;
    const double ds = s.disc.t[a] - s.disc.t[b];
    CHECK(k.N(a, b) == doctest::Approx(-1.0 / kTwoPi).epsilon(1e-13));
    CHECK(k.Nk(a, b) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-13));
    CHECK(k.M(a, b) == doctest::Approx(-std::cos(ds / 2) / std::sin(ds / 2) / kTwoPi).epsilon(1e-12));
    CHECK(std::abs(k.M1(a, b)) < 1e-14);
  }
  for (Index t = 0; t < n; ++t) {
    CHECK(k.N(t, t) == doctest::Approx(-1.0 / kTwoPi).epsilon(1e-14));
    CHECK(std::abs(k.M1_diag(t)) < 1e-15);
    CHECK(std::abs(k.Ng(t, t)) < 1e-15);
  }
  CHECK_THROWS_AS(k.M(3, 3), Error);
  CHECK_THROWS_AS(k.Nk(3, 3), Error);
}

TEST_CASE("discrete row sums of N approach -1") {
  const auto s = three_circles(128);
  const KernelEvaluator k(s.disc, s.aux);
  double worst = 0.0;
  for (Index i = 0; i < s.disc.size(); i += 7) {
    double sum = 0.0;
    for (Index j = 0; j < s.disc.size(); ++j) sum += k.N(i, j);
    worst = std::max(worst, std::abs(kTwoPi / s.disc.n * sum + 1.0));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("adjoint-form kernels are negated transposes") {
  const auto s = three_circles(32, PiecewiseConstant{{0.3, 1.1, -0.4}});
  const KernelEvaluator k(s.disc, s.aux);
  std::mt19937 rng(11);
  std::uniform_int_distribution<Index> pick(0, s.disc.size() - 1);
  int checked = 0;
  while (checked < 50) {
    const Index a = pick(rng), b = pick(rng);
    if (a == b) continue;
    ++checked;
    CHECK(std::abs(k.Ntilde(a, b) + k.N(b, a)) < 1e-14);
    CHECK(std::abs(k.Mtilde(a, b) + k.M(b, a)) < 1e-14);
  }
}

TEST_CASE("N* splits into the Neumann kernel and N_g") {
  const auto s = three_circles(32, PiecewiseConstant{{0.3, 1.1, -0.4}});
  const KernelEvaluator k(s.disc, s.aux);
  std::mt19937 rng(13);
  std::uniform_int_distribution<Index> pick(0, s.disc.size() - 1);
  int checked = 0;
  while (checked < 50) {
    const Index a = pick(rng), b = pick(rng);
    if (a == b) continue;
    ++checked;
    CHECK(std::abs(k.N(b, a) - (-k.Nk(a, b) + k.Ng(a, b))) < 1e-13);
  }
  for (Index t = 0; t < s.disc.size(); t += 5)
    CHECK(std::abs(k.N(t, t) - (k.Ng(t, t) - 0.5 * (s.disc.etapp[t] / s.disc.etap[t]).imag() / kPi)) < 1e-14);
}

TEST_CASE("theta shift leaves same-component values unchanged") {
  const auto base = three_circles(24, PiecewiseConstant{{0.2, 0.9, 1.4}});
  const auto shifted = three_circles(24, PiecewiseConstant{{0.2 + 0.7, 0.9 - 0.3, 1.4 + 2.0}});
  const KernelEvaluator k0(base.disc, base.aux), k1(shifted.disc, shifted.aux);
  for (Index a = 0; a < base.disc.size(); ++a)
    for (Index b = 0; b < base.disc.size(); ++b) {
      if (base.disc.component_of(a) != base.disc.component_of(b)) continue;
      CHECK(std::abs(k0.N(a, b) - k1.N(a, b)) < 1e-13);
    }
}

TEST_CASE("kernel evaluation is repeatable") {
  const auto s = three_circles(16);
  const KernelEvaluator k(s.disc, s.aux);
  CHECK(k.N(2, 30) == k.N(2, 30));
  CHECK(k.M(40, 3) == k.M(40, 3));
}

TEST_CASE("diagonals are refused at corner nodes") {
  const auto dom = builtin::graded_square(3);
  const auto disc = discretize(dom, 16);
  const auto aux = build_A(dom, disc, PiecewiseConstant::constant(1, kPi / 2));
  const KernelEvaluator k(disc, aux);
  CHECK_THROWS_AS(k.N(0, 0), Error);
  CHECK_THROWS_AS(k.M1_diag(0), Error);
  CHECK_THROWS_AS(k.Ng(0, 0), Error);
  CHECK(std::isfinite(k.N(1, 1)));
  CHECK(std::isfinite(k.N(1, 0)));
}
