// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <gnk/bie.hpp>
#include <gnk/builtin.hpp>

#include "dense_oracle.hpp"

using namespace gnk;

namespace {

// Pinned thresholds.
constexpr double kExactTol = 1e-10;
constexpr double kExactSeconds = 5.0;
constexpr double kAdjointTol = 1e-10;
constexpr double kDenseTol = 1e-12;
constexpr double kFmmTol[5] = {0.5e-3, 0.5e-6, 0.5e-9, 0.5e-12, 5e-15};
constexpr double kFastRatioMax = 2.8;
constexpr double kDirectRatioMin = 3.5;
constexpr double kCloseTol = 1e-6;
constexpr double kCornerTol = 1e-6;
constexpr double kCauchyNearTol = 1e-10;
constexpr int kGmresIterMax = 30;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double max_abs(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Example {
  Domain domain;
  PiecewiseConstant theta;
  Complex (*f)(Complex);
  const char* label;
};

std::vector<Example> example1() {
  return {{builtin::example1_bounded(3), PiecewiseConstant::constant(3, kPi / 2),
           builtin::example1_f_bounded, "bounded"},
          {builtin::example1_unbounded(3), PiecewiseConstant{builtin::example1_theta(3)},
           builtin::example1_f_unbounded, "unbounded"}};
}

std::pair<Vector, Vector> exact_pair(const Domain& dom, int n, const PiecewiseConstant& theta,
                                     Complex (*f)(Complex)) {
  const auto d = discretize(dom, n);
  const auto aux = build_A(dom, d, theta);
  Vector g(d.size()), mu(d.size());
  for (Index i = 0; i < d.size(); ++i) {
    const Complex v = aux.A[i] * f(d.eta[i]);
    g[i] = v.real();
    mu[i] = v.imag();
  }
  return {g, mu};
}

Vector random_vector(Index size, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Vector v(size);
  for (auto& x : v) x = g(rng);
  return v;
}

CVector random_points(Index size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CVector z(size);
  for (auto& v : z) v = {u(rng), u(rng)};
  return z;
}

CVector random_weights(Index size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CVector x(size);
  for (auto& v : x) v = {g(rng), g(rng)};
  return x;
}

bool monotone_within_cycles(const SolveReport& rep) {
  std::vector<std::size_t> bounds = rep.cycle_starts;
  bounds.push_back(rep.residual_history.size());
  for (std::size_t c = 0; c + 1 < bounds.size(); ++c)
    for (std::size_t i = bounds[c] + 1; i < bounds[c + 1]; ++i)
      if (rep.residual_history[i] > rep.residual_history[i - 1] * (1 + 1e-12)) return false;
  return true;
}

// ---------------------------------------------------------------------------

Outcome exact_solutions() {
  bool ok = true;
  std::string detail;
  for (const auto& ex : example1()) {
    const int n = 256;
    const auto t0 = Clock::now();
    const auto [gamma, mu] = exact_pair(ex.domain, n, ex.theta, ex.f);
    const auto sol = solve_gnk(make_gnk_problem(ex.domain, n, ex.theta, gamma));
    const double secs = seconds_since(t0);
    const double em = max_abs(sol.mu - mu), eh = max_abs(sol.h);
    ok = ok && em <= kExactTol && eh <= kExactTol && secs < kExactSeconds;
    detail += std::string(ex.label) + ": err_mu=" + num(em) + " err_h=" + num(eh) + " t=" +
              num(secs) + "s; ";
  }
  return {ok, detail};
}

Outcome adjoint_orthogonality() {
  bool ok = true;
  std::string detail;
  for (const auto& ex : example1()) {
    const int n = 256;
    const auto sol = solve_adjoint(
        make_adjoint_problem(ex.domain, n, ex.theta, Vector::Ones(3 * n)));
    const auto [gamma, mu] = exact_pair(ex.domain, n, ex.theta, ex.f);
    const double En = orthogonality_defect(gamma, sol.phi, n);
    ok = ok && En <= kAdjointTol && sol.report.converged;
    detail += std::string(ex.label) + ": E_n=" + num(En) + "; ";
  }
  return {ok, detail};
}

Outcome dense_equivalence() {
  const int n = 64;
  double worst = 0.0;
  for (const auto& ex : example1()) {
    SolverOptions opts;
    opts.fastsum.force_fast = true;
    const Vector gamma = random_vector(3 * n, 1);
    const auto p = make_gnk_problem(ex.domain, n, ex.theta, gamma, opts);
    const KernelEvaluator kern(p.ops->boundary(), p.ops->aux());
    const Matrix fB = oracle::dense_fB(kern), M = oracle::dense_M(kern);
    const Matrix L = oracle::block_diagonal(oracle::dense_L(n), 3);
    const double c = ex.domain.is_bounded() ? 1.0 : -1.0;
    const auto adj = make_adjoint_problem(ex.domain, n, ex.theta, gamma, opts);
    const Matrix gB = oracle::dense_gB(kern, c);
    const Vector x = random_vector(3 * n, 2);
    worst = std::max(worst, max_abs(assemble_rhs_y(p) - M * gamma));
    worst = std::max(worst, max_abs(matvec_fB(p, x) - fB * x));
    worst = std::max(worst, max_abs(compute_h(p, x) - 0.5 * (M * x - fB * gamma)));
    worst = std::max(worst, max_abs(p.ops->apply_Lhat(x) - L * x));
    worst = std::max(worst, max_abs(matvec_gB(adj, x) - gB * x));

    const auto& d = p.ops->boundary();
    CVector f(d.size());
    for (Index i = 0; i < d.size(); ++i) f[i] = ex.f(d.eta[i]);
    CVector z(3);
    if (ex.domain.is_bounded())
      z << Complex(0.85, 0.0), Complex(0.0, 0.85), Complex(0.1, 0.05);
    else
      z << Complex(3.0, 0.0), Complex(0.0, 2.5), Complex(-4.0, 1.0);
    const CVector fast = cauchy_eval(d, p.ops->plan(), f, z, ex.domain.kind(), 0.0);
    const CVector ref = ex.domain.is_bounded() ? oracle::dense_cauchy_bounded(d, f, z)
                                               : oracle::dense_cauchy_unbounded(d, f, z, 0.0);
    worst = std::max(worst, (fast - ref).cwiseAbs().maxCoeff());

    const Matrix K = oracle::dense_K(n), Ln = oracle::dense_L(n);
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (a == b) continue;
          const Index i = k * n + a, j = k * n + b;
          const double lhs = -K(a, b) + kTwoPi / n * kern.M1(i, j);
          const double rhs = Ln(a, b) + kTwoPi / n * kern.M(i, j);
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  }
  return {worst <= kDenseTol, "max abs deviation " + num(worst)};
}

Outcome fmm_accuracy() {
  const Index N = 8192;
  const CVector z = random_points(N, 2024), x = random_weights(N, 2025);
  const CVector ref = direct_e_matvec(z, x);
  bool ok = true;
  std::string detail;
  FastSumOptions fo;
  fo.force_fast = true;
  for (int iprec = 1; iprec <= 5; ++iprec) {
    const FastSumPlan plan(z, iprec, fo);
    const double err = (plan.e_matvec(x) - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
    ok = ok && err <= kFmmTol[iprec - 1];
    detail += "iprec" + std::to_string(iprec) + "=" + num(err) + " ";
  }
  return {ok, detail};
}

Outcome scaling() {
  FastSumOptions fo;
  fo.force_fast = true;
  double fast[2], direct[2];
  for (int k = 0; k < 2; ++k) {
    const Index N = Index(1) << (15 + k);
    const CVector z = random_points(N, 7 + k), x = random_weights(N, 9 + k);
    const FastSumPlan plan(z, 4, fo);
    CVector r = plan.e_matvec(x);  // warm-up
    const int repeats = 5;
    const auto t0 = Clock::now();
    for (int i = 0; i < repeats; ++i) r = plan.e_matvec(x);
    fast[k] = seconds_since(t0) / repeats;
    const auto t1 = Clock::now();
    r = direct_e_matvec(z, x);
    direct[k] = seconds_since(t1);
  }
  const double rf = fast[1] / fast[0], rd = direct[1] / direct[0];
  return {rf <= kFastRatioMax && rd >= kDirectRatioMin,
          "fast " + num(fast[0]) + "s->" + num(fast[1]) + "s ratio " + num(rf) + ", direct " +
              num(direct[0]) + "s->" + num(direct[1]) + "s ratio " + num(rd)};
}

Outcome close_boundaries() {
  const int n = 512;
  const auto theta = PiecewiseConstant::constant(5, kPi / 2);
  std::vector<int> iters;
  std::vector<double> errs;
  bool ok = true;
  std::string detail;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const auto dom = builtin::example2_bounded(eps);
    const auto [gamma, mu] = exact_pair(dom, n, theta, builtin::example1_f_bounded);
    const auto sol = solve_gnk(make_gnk_problem(dom, n, theta, gamma));
    const double err = max_abs(sol.mu - mu);
    iters.push_back(sol.report.iterations);
    errs.push_back(err);
    if (eps == 1e-2) {
      SolverOptions plain;
      plain.subtraction = false;
      const double base = max_abs(solve_gnk(make_gnk_problem(dom, n, theta, gamma, plain)).mu - mu);
      ok = ok && err <= kCloseTol && err < base;
      detail += "eps=1e-2 err=" + num(err) + " plain=" + num(base) + "; ";
      for (const auto& th : {theta, PiecewiseConstant{{kPi / 2, 0, kPi / 2, 0, kPi / 2}}}) {
        const auto adj = solve_adjoint(make_adjoint_problem(dom, n, th, Vector::Ones(5 * n)));
        const auto [g2, unused] = exact_pair(dom, n, th, builtin::example1_f_bounded);
        const double En = orthogonality_defect(g2, adj.phi, n);
        ok = ok && En <= kCloseTol;
        detail += "E_n=" + num(En) + " ";
      }
    }
  }
  for (std::size_t k = 1; k < iters.size(); ++k) {
    ok = ok && iters[k] + 1 >= iters[k - 1];
    ok = ok && errs[k] >= errs[k - 1];
  }
  detail += "; iters " + std::to_string(iters[0]) + "/" + std::to_string(iters[1]) + "/" +
            std::to_string(iters[2]) + ", errs " + num(errs[0]) + "/" + num(errs[1]) + "/" +
            num(errs[2]);
  return {ok, detail};
}

Outcome corner_grading() {
  const auto dom = builtin::graded_square(3);
  const auto theta = PiecewiseConstant::constant(1, kPi / 2);
  double prev = INFINITY;
  bool ok = true;
  std::string detail;
  for (int n : {64, 128, 256, 512}) {
    const auto [gamma, mu] = exact_pair(dom, n, theta, builtin::example1_f_bounded);
    const double err = max_abs(solve_gnk(make_gnk_problem(dom, n, theta, gamma)).mu - mu);
    ok = ok && err < prev;
    prev = err;
    detail += "n=" + std::to_string(n) + ":" + num(err) + " ";
  }
  ok = ok && prev <= kCornerTol;
  return {ok, detail};
}

Outcome cauchy() {
  const auto d = discretize(builtin::unit_disc(), 128);
  CVector f(d.size());
  for (Index i = 0; i < d.size(); ++i) f[i] = d.eta[i];
  CVector z(4);
  z << 0.99, std::polar(0.99, 0.7), std::polar(0.99, kPi / 128), Complex(0.0, -0.99);
  const double err = (cauchy_eval(d, f, z, DomainKind::Bounded) - z).cwiseAbs().maxCoeff();
  const auto d3 = discretize(builtin::example1_bounded(3), 64);
  CVector zz(3);
  zz << Complex(0.85, 0.0), Complex(0.0, 0.85), Complex(0.1, 0.05);
  const CVector ones = cauchy_eval(d3, CVector::Ones(d3.size()), zz, DomainKind::Bounded);
  bool exact = true;
  for (const auto& v : ones) exact = exact && v == Complex(1.0);
  return {err <= kCauchyNearTol && exact,
          "f=z at |z|=0.99: err=" + num(err) + "; f=1 exact: " + (exact ? "yes" : "no")};
}

Outcome gmres_behaviour() {
  bool ok = true;
  std::string detail;
  for (const auto& ex : example1()) {
    const int n = 256;
    SolverOptions opts;
    opts.gmres.restart = 10;
    opts.gmres.tol = 1e-12;
    opts.gmres.maxit = 10;
    const auto [gamma, mu] = exact_pair(ex.domain, n, ex.theta, ex.f);
    const auto sol = solve_gnk(make_gnk_problem(ex.domain, n, ex.theta, gamma, opts));
    const bool mono = monotone_within_cycles(sol.report);
    ok = ok && sol.report.converged && mono && sol.report.iterations <= kGmresIterMax;
    detail += std::string(ex.label) + ": iters=" + std::to_string(sol.report.iterations) +
              (mono ? " monotone" : " NOT monotone") + "; ";
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exact-solution convergence", exact_solutions},
      {"adjoint orthogonality", adjoint_orthogonality},
      {"dense-oracle equivalence", dense_equivalence},
      {"FMM accuracy classes", fmm_accuracy},
      {"complexity scaling", scaling},
      {"close-boundary robustness", close_boundaries},
      {"corner grading", corner_grading},
      {"Cauchy evaluator", cauchy},
      {"GMRES behaviour", gmres_behaviour},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
