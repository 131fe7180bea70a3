#pragma once

#include "gnk/geometry.hpp"

namespace gnk {

/// Samples of the auxiliary function A and its derivative at the nodes.
///
/// Bounded domains use A(t) = exp(i(pi/2 - theta(t))) (eta(t) - alpha),
/// unbounded ones A(t) = exp(i(pi/2 - theta(t))) with A' = 0.
struct AuxiliaryFunction {
  PiecewiseConstant theta;
  DomainKind kind = DomainKind::Bounded;
  Complex alpha = 0.0;
  CVector A;
  CVector Ap;

  /// Adjoint function eta'/A, derived on demand.
  CVector adjoint(const DiscreteBoundary& disc) const;
};

AuxiliaryFunction build_A(const Domain& domain, const DiscreteBoundary& disc,
                          const PiecewiseConstant& theta);

/// Pointwise evaluation of the kernels N, M, M1, N_k, N_g and the adjoint-form
/// kernels between nodes of one discretization. The solvers never call these;
/// they exist for dense reference assembly and identity checks.
class KernelEvaluator {
 public:
  KernelEvaluator(const DiscreteBoundary& disc, const AuxiliaryFunction& aux);

  /// Generalized Neumann kernel; diagonal uses the continuous limit.
  double N(Index s, Index t) const;
  /// Singular companion kernel, off-diagonal only.
  double M(Index s, Index t) const;
  /// Continuous part of M for a same-component pair; diagonal by its limit.
  double M1(Index s, Index t) const;
  double M1_diag(Index t) const;
  /// Classical Neumann kernel, off-diagonal only.
  double Nk(Index s, Index t) const;
  double Ng(Index s, Index t) const;
  /// Kernels formed with the adjoint function eta'/A.
  double Ntilde(Index s, Index t) const;
  double Mtilde(Index s, Index t) const;

  const DiscreteBoundary& boundary() const { return disc_; }

 private:
  Complex core(Index s, Index t) const;
  void require_smooth(Index t, const char* what) const;

  DiscreteBoundary disc_;
  CVector A_;
  CVector Ap_;
  CVector Atilde_;
};

}  // namespace gnk
