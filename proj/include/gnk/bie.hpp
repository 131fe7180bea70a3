#pragma once

#include <memory>

#include "gnk/conjugation.hpp"
#include "gnk/fastsum.hpp"
#include "gnk/geometry.hpp"
#include "gnk/gmres.hpp"
#include "gnk/kernels.hpp"

namespace gnk {

struct SolverOptions {
  int iprec = 4;
  GmresConfig gmres{};
  FastSumOptions fastsum{};
  /// Off selects the plain Nystrom discretization with explicit kernel
  /// diagonals, kept as a comparison baseline.
  bool subtraction = true;
};

/// Discretized boundary operators shared by both equations: node samples, A,
/// the fast summation plan over eta(t) and the precomputed weight vectors.
///
/// With w = eta'/A and E the self-excluded Cauchy matrix:
///   B x = -(2/n) Im[A . E(w x)],   D x = -(2/n) Re[A . E(w x)],
///   B' x = (2/n) Im[(eta'/A) . E(A x)].
class BoundaryOperators {
 public:
  BoundaryOperators(DiscreteBoundary disc, AuxiliaryFunction aux, const SolverOptions& options);

  const DiscreteBoundary& boundary() const { return disc_; }
  const AuxiliaryFunction& aux() const { return aux_; }
  const FastSumPlan& plan() const { return plan_; }
  const CirculantSymbol& conjugation_symbol() const { return symbol_; }
  int n() const { return disc_.n; }
  Index size() const { return disc_.size(); }

  /// B 1 and D 1, from the cached E(eta'/A).
  const Vector& B_one() const { return B1_; }
  const Vector& D_one() const { return D1_; }

  Vector apply_B(const Vector& x) const;
  Vector apply_D(const Vector& x) const;
  Vector apply_B_transpose(const Vector& x) const;
  Vector apply_Lhat(const Vector& x) const;
  /// Block averages: every block replaced by its mean.
  Vector apply_P(const Vector& x) const;

  /// (2/n) pi N(t_i, t_i), the scaled kernel diagonal; requires smooth nodes.
  Vector scaled_N_diagonal() const;
  /// (2/n) pi M1(t_i, t_i).
  Vector scaled_M1_diagonal() const;

  /// Discrete (I - N): 2x + diag(B1)x - Bx with subtraction,
  /// x - Bx - diag((2/n) pi N_ii) x without.
  Vector apply_I_minus_N(const Vector& x, bool subtraction = true) const;
  /// Discrete M: Dx - diag(D1)x + L-hat x with subtraction,
  /// Dx + L-hat x + diag((2/n) pi M1_ii) x without.
  Vector apply_M(const Vector& x, bool subtraction = true) const;

 private:
  CVector E(const CVector& weights) const { return plan_.e_matvec(weights); }

  DiscreteBoundary disc_;
  AuxiliaryFunction aux_;
  FastSumPlan plan_;
  CirculantSymbol symbol_;
  CVector w_;      // eta'/A
  CVector Eone_;   // E(eta'/A)
  Vector B1_;
  Vector D1_;
};

/// Boundary data for (I - N) mu = -M gamma together with the solver settings.
struct GnkProblem {
  std::shared_ptr<const BoundaryOperators> ops;
  Vector gamma;
  SolverOptions options;
};

struct GnkSolution {
  Vector mu;
  /// h(t) at every node; piecewise constant up to discretization error.
  Vector h;
  /// Mean of h over each component, the canonical h_j.
  Vector h_means;
  SolveReport report;
};

GnkProblem make_gnk_problem(const Domain& domain, int n, const PiecewiseConstant& theta,
                            Vector gamma, const SolverOptions& options = {});

/// y = D gamma - diag(D1) gamma + L-hat gamma (discretized M gamma).
Vector assemble_rhs_y(const GnkProblem& problem);
/// f_B(x) = (2I + diag(B1) - B) x, or the unsubtracted baseline when disabled.
Vector matvec_fB(const GnkProblem& problem, const Vector& x);
/// h = ([D - diag(D1) + L-hat] mu - [2 + diag(B1) - B] gamma) / 2.
Vector compute_h(const GnkProblem& problem, const Vector& mu);
GnkSolution solve_gnk(const GnkProblem& problem);

/// Data for (I + N* + J) phi = gamma.
struct AdjointProblem {
  std::shared_ptr<const BoundaryOperators> ops;
  Vector gamma;
  SolverOptions options;
  /// +1 for bounded domains, -1 for unbounded ones.
  double c = 1.0;
  /// Diagonal of the subtracted system.
  Vector e;
};

struct AdjointSolution {
  Vector phi;
  SolveReport report;
};

AdjointProblem make_adjoint_problem(const Domain& domain, int n, const PiecewiseConstant& theta,
                                    Vector gamma, const SolverOptions& options = {});

/// e = 1 - c - (2/n) Im[E eta'] + (2/n) Im[eta''/eta' - A'/A].
Vector assemble_e_vector(const BoundaryOperators& ops, double c);
/// g_B(x) = (diag(e) + B' + P-hat) x, or the unsubtracted baseline
/// x + B'x + diag((2/n) pi N_ii) x + P-hat x when disabled.
Vector matvec_gB(const AdjointProblem& problem, const Vector& x);
AdjointSolution solve_adjoint(const AdjointProblem& problem);

/// Discrete orthogonality defect |(2pi/n) sum_j gamma_j phi_j|.
double orthogonality_defect(const Vector& gamma, const Vector& phi, int n);

/// Interior values of an analytic function from its boundary values by the
/// singularity-subtracted trapezoidal Cauchy formula. Unbounded domains need f(inf).
CVector cauchy_eval(const DiscreteBoundary& disc, const CVector& boundary_values,
                    const CVector& targets, DomainKind kind, Complex f_inf = 0.0,
                    int iprec = 4, const FastSumOptions& options = {});

/// Same, reusing a plan built over disc.eta.
CVector cauchy_eval(const DiscreteBoundary& disc, const FastSumPlan& plan,
                    const CVector& boundary_values, const CVector& targets, DomainKind kind,
                    Complex f_inf = 0.0);

}  // namespace gnk
