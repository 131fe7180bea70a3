#include "gnk/bie.hpp"

#include <cmath>
#include <utility>

namespace gnk {

BoundaryOperators::BoundaryOperators(DiscreteBoundary disc, AuxiliaryFunction aux,
                                     const SolverOptions& options)
    : disc_(std::move(disc)),
      aux_(std::move(aux)),
      plan_(disc_.eta, options.iprec, options.fastsum),
      symbol_(CirculantSymbol::conjugation(disc_.n)) {
  if (aux_.A.size() != disc_.size()) throw Error("auxiliary function does not match the nodes");
  w_ = disc_.etap.cwiseQuotient(aux_.A);
  if (!w_.allFinite()) throw Error("eta'/A is not finite (A vanishes at a node)");
  Eone_ = E(w_);
  const double s = 2.0 / disc_.n;
  const CVector AE = aux_.A.cwiseProduct(Eone_);
  B1_ = -s * AE.imag();
  D1_ = -s * AE.real();
}

Vector BoundaryOperators::apply_B(const Vector& x) const {
  if (!x.allFinite()) throw Error("apply_B: NaN in weights");
  const CVector Ex = E(w_.cwiseProduct(x.cast<Complex>()));
  return -(2.0 / disc_.n) * aux_.A.cwiseProduct(Ex).imag();
}

Vector BoundaryOperators::apply_D(const Vector& x) const {
  if (!x.allFinite()) throw Error("apply_D: NaN in weights");
  const CVector Ex = E(w_.cwiseProduct(x.cast<Complex>()));
  return -(2.0 / disc_.n) * aux_.A.cwiseProduct(Ex).real();
}

Vector BoundaryOperators::apply_B_transpose(const Vector& x) const {
  if (!x.allFinite()) throw Error("apply_B_transpose: NaN in weights");
  const CVector EAx = E(aux_.A.cwiseProduct(x.cast<Complex>()));
  return (2.0 / disc_.n) * w_.cwiseProduct(EAx).imag();
}

Vector BoundaryOperators::apply_Lhat(const Vector& x) const {
  return gnk::apply_Lhat(symbol_, x);
}

Vector BoundaryOperators::apply_P(const Vector& x) const {
  if (x.size() != size()) throw Error("apply_P: length mismatch");
  Vector out(x.size());
  const Index n = disc_.n;
  for (int k = 0; k < disc_.components; ++k)
    out.segment(k * n, n).setConstant(x.segment(k * n, n).mean());
  return out;
}

Vector BoundaryOperators::scaled_N_diagonal() const {
  if (disc_.has_corner_nodes())
    throw Error("kernel diagonal is undefined at corner nodes; use the subtracted system");
  const CVector q1 = disc_.etapp.cwiseQuotient(disc_.etap);
  const CVector q2 = aux_.Ap.cwiseQuotient(aux_.A);
  return (2.0 / disc_.n) * (0.5 * q1.imag() - q2.imag());
}

Vector BoundaryOperators::scaled_M1_diagonal() const {
  if (disc_.has_corner_nodes())
    throw Error("kernel diagonal is undefined at corner nodes; use the subtracted system");
  const CVector q1 = disc_.etapp.cwiseQuotient(disc_.etap);
  const CVector q2 = aux_.Ap.cwiseQuotient(aux_.A);
  return (2.0 / disc_.n) * (0.5 * q1.real() - q2.real());
}

Vector BoundaryOperators::apply_I_minus_N(const Vector& x, bool subtraction) const {
  if (subtraction) return 2.0 * x + B1_.cwiseProduct(x) - apply_B(x);
  return x - apply_B(x) - scaled_N_diagonal().cwiseProduct(x);
}

Vector BoundaryOperators::apply_M(const Vector& x, bool subtraction) const {
  if (subtraction) return apply_D(x) - D1_.cwiseProduct(x) + apply_Lhat(x);
  return apply_D(x) + apply_Lhat(x) + scaled_M1_diagonal().cwiseProduct(x);
}

// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<const BoundaryOperators> make_operators(const Domain& domain, int n,
                                                        const PiecewiseConstant& theta,
                                                        const SolverOptions& options) {
  DiscreteBoundary disc = discretize(domain, n);
  AuxiliaryFunction aux = build_A(domain, disc, theta);
  return std::make_shared<const BoundaryOperators>(std::move(disc), std::move(aux), options);
}

void check_gamma(const BoundaryOperators& ops, const Vector& gamma) {
  if (gamma.size() != ops.size())
    throw Error("gamma must have one value per node ((m+1) n = " + std::to_string(ops.size()) +
                ")");
  if (!gamma.allFinite()) throw Error("gamma contains non-finite values");
}

Vector block_means(const Vector& v, int n) {
  const Index blocks = v.size() / n;
  Vector means(blocks);
  for (Index k = 0; k < blocks; ++k) means[k] = v.segment(k * n, n).mean();
  return means;
}

}  // namespace

GnkProblem make_gnk_problem(const Domain& domain, int n, const PiecewiseConstant& theta,
                            Vector gamma, const SolverOptions& options) {
  GnkProblem p{make_operators(domain, n, theta, options), std::move(gamma), options};
  check_gamma(*p.ops, p.gamma);
  return p;
}

Vector assemble_rhs_y(const GnkProblem& problem) {
  check_gamma(*problem.ops, problem.gamma);
  return problem.ops->apply_M(problem.gamma, problem.options.subtraction);
}

Vector matvec_fB(const GnkProblem& problem, const Vector& x) {
  return problem.ops->apply_I_minus_N(x, problem.options.subtraction);
}

Vector compute_h(const GnkProblem& problem, const Vector& mu) {
  const bool sub = problem.options.subtraction;
  return 0.5 * (problem.ops->apply_M(mu, sub) - problem.ops->apply_I_minus_N(problem.gamma, sub));
}

GnkSolution solve_gnk(const GnkProblem& problem) {
  const Vector y = assemble_rhs_y(problem);
  GnkSolution sol;
  sol.report = gmres_solve([&](const Vector& x) { return matvec_fB(problem, x); }, -y,
                           problem.options.gmres);
  sol.mu = sol.report.solution;
  sol.h = compute_h(problem, sol.mu);
  sol.h_means = block_means(sol.h, problem.ops->n());
  return sol;
}

// ---------------------------------------------------------------------------

Vector assemble_e_vector(const BoundaryOperators& ops, double c) {
  const DiscreteBoundary& d = ops.boundary();
  if (d.has_corner_nodes())
    throw Error("adjoint system needs eta''/eta' at every node; a node lies on a corner");
  const double s = 2.0 / d.n;
  const CVector Eetap = ops.plan().e_matvec(d.etap);
  const CVector q = d.etapp.cwiseQuotient(d.etap) - ops.aux().Ap.cwiseQuotient(ops.aux().A);
  return Vector::Constant(d.size(), 1.0 - c) - s * Eetap.imag() + s * q.imag();
}

AdjointProblem make_adjoint_problem(const Domain& domain, int n, const PiecewiseConstant& theta,
                                    Vector gamma, const SolverOptions& options) {
  AdjointProblem p;
  p.ops = make_operators(domain, n, theta, options);
  p.gamma = std::move(gamma);
  p.options = options;
  p.c = domain.is_bounded() ? 1.0 : -1.0;
  check_gamma(*p.ops, p.gamma);
  if (options.subtraction) p.e = assemble_e_vector(*p.ops, p.c);
  return p;
}

Vector matvec_gB(const AdjointProblem& problem, const Vector& x) {
  const BoundaryOperators& ops = *problem.ops;
  if (problem.options.subtraction) {
    if (problem.e.size() != x.size()) throw Error("matvec_gB: e vector not assembled");
    return problem.e.cwiseProduct(x) + ops.apply_B_transpose(x) + ops.apply_P(x);
  }
  return x + ops.apply_B_transpose(x) + ops.scaled_N_diagonal().cwiseProduct(x) + ops.apply_P(x);
}

AdjointSolution solve_adjoint(const AdjointProblem& problem) {
  check_gamma(*problem.ops, problem.gamma);
  AdjointSolution sol;
  sol.report = gmres_solve([&](const Vector& x) { return matvec_gB(problem, x); }, problem.gamma,
                           problem.options.gmres);
  sol.phi = sol.report.solution;
  return sol;
}

double orthogonality_defect(const Vector& gamma, const Vector& phi, int n) {
  if (gamma.size() != phi.size()) throw Error("orthogonality_defect: length mismatch");
  return std::abs(kTwoPi / n * gamma.dot(phi));
}

}  // namespace gnk
