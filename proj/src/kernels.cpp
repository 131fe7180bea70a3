#include "gnk/kernels.hpp"

#include <cmath>

namespace gnk {

CVector AuxiliaryFunction::adjoint(const DiscreteBoundary& disc) const {
  return disc.etap.cwiseQuotient(A);
}

AuxiliaryFunction build_A(const Domain& domain, const DiscreteBoundary& disc,
                          const PiecewiseConstant& theta) {
  if (theta.size() != disc.components)
    throw Error("theta must have one value per boundary component (m+1 = " +
                std::to_string(disc.components) + ")");
  AuxiliaryFunction aux;
  aux.theta = theta;
  aux.kind = domain.kind();
  aux.A.resize(disc.size());
  aux.Ap.resize(disc.size());

  if (domain.is_bounded()) {
    if (!domain.alpha()) throw Error("bounded domain requires the base point alpha");
    aux.alpha = *domain.alpha();
    const Complex w = discrete_winding_number(disc, aux.alpha);
    if (!std::isfinite(std::abs(w)) || std::abs(w - 1.0) > 0.25)
      throw Error("alpha is not strictly inside the domain (discrete winding number " +
                  std::to_string(w.real()) + ")");
  }

  for (Index i = 0; i < disc.size(); ++i) {
    const Complex rot = std::exp(kI * (0.5 * kPi - theta[disc.component_of(i)]));
    if (domain.is_bounded()) {
      aux.A[i] = rot * (disc.eta[i] - aux.alpha);
      aux.Ap[i] = rot * disc.etap[i];
    } else {
      aux.A[i] = rot;
      aux.Ap[i] = 0.0;
    }
  }
  return aux;
}

KernelEvaluator::KernelEvaluator(const DiscreteBoundary& disc, const AuxiliaryFunction& aux)
    : disc_(disc), A_(aux.A), Ap_(aux.Ap), Atilde_(aux.adjoint(disc)) {}

Complex KernelEvaluator::core(Index s, Index t) const {
  return (A_[s] / A_[t]) * disc_.etap[t] / (disc_.eta[t] - disc_.eta[s]);
}

void KernelEvaluator::require_smooth(Index t, const char* what) const {
  if (disc_.corner_node[t])
    throw Error(std::string(what) + ": diagonal undefined at a corner node");
}

double KernelEvaluator::N(Index s, Index t) const {
  if (s != t) return core(s, t).imag() / kPi;
  require_smooth(t, "N");
  return (0.5 * (disc_.etapp[t] / disc_.etap[t]).imag() - (Ap_[t] / A_[t]).imag()) / kPi;
}

double KernelEvaluator::M(Index s, Index t) const {
  if (s == t) throw Error("M is singular on the diagonal");
  return core(s, t).real() / kPi;
}

double KernelEvaluator::M1(Index s, Index t) const {
  if (disc_.component_of(s) != disc_.component_of(t))
    throw Error("M1 is defined for same-component pairs only");
  if (s == t) return M1_diag(t);
  return M(s, t) + std::cos(0.5 * (disc_.t[s] - disc_.t[t])) /
                       std::sin(0.5 * (disc_.t[s] - disc_.t[t])) / kTwoPi;
}

double KernelEvaluator::M1_diag(Index t) const {
  require_smooth(t, "M1");
  return (0.5 * (disc_.etapp[t] / disc_.etap[t]).real() - (Ap_[t] / A_[t]).real()) / kPi;
}

double KernelEvaluator::Nk(Index s, Index t) const {
  if (s == t) throw Error("N_k diagonal is not provided");
  return (disc_.etap[t] / (disc_.eta[t] - disc_.eta[s])).imag() / kPi;
}

double KernelEvaluator::Ng(Index s, Index t) const {
  if (s == t) {
    require_smooth(t, "N_g");
    return (disc_.etapp[t] / disc_.etap[t] - Ap_[t] / A_[t]).imag() / kPi;
  }
  const Complex num = A_[s] * disc_.etap[t] - A_[t] * disc_.etap[s];
  return (num / (A_[s] * (disc_.eta[t] - disc_.eta[s]))).imag() / kPi;
}

double KernelEvaluator::Ntilde(Index s, Index t) const {
  if (s == t) throw Error("Ntilde diagonal is not provided");
  return ((Atilde_[s] / Atilde_[t]) * disc_.etap[t] / (disc_.eta[t] - disc_.eta[s])).imag() / kPi;
}

double KernelEvaluator::Mtilde(Index s, Index t) const {
  if (s == t) throw Error("Mtilde is singular on the diagonal");
  return ((Atilde_[s] / Atilde_[t]) * disc_.etap[t] / (disc_.eta[t] - disc_.eta[s])).real() / kPi;
}

}  // namespace gnk
