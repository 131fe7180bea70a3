#include "gnk/bie.hpp"

namespace gnk {

CVector cauchy_eval(const DiscreteBoundary& disc, const FastSumPlan& plan,
                    const CVector& boundary_values, const CVector& targets, DomainKind kind,
                    Complex f_inf) {
  if (boundary_values.size() != disc.size())
    throw Error("cauchy_eval: one boundary value per node required");
  if (plan.size() != disc.size()) throw Error("cauchy_eval: plan does not match the boundary");
  const double exclusion = 1e-12 * boundary_diameter(disc);
  const CVector num = plan.f_matvec(boundary_values.cwiseProduct(disc.etap), targets, exclusion);
  const CVector den = plan.f_matvec(disc.etap, targets, exclusion);
  if (kind == DomainKind::Bounded) return num.cwiseQuotient(den);
  const Complex scale = 1.0 / (static_cast<double>(disc.n) * kI);
  const CVector top = (Complex(f_inf) - (scale * num).array()).matrix();
  const CVector bottom = (Complex(1.0) - (scale * den).array()).matrix();
  return top.cwiseQuotient(bottom);
}

CVector cauchy_eval(const DiscreteBoundary& disc, const CVector& boundary_values,
                    const CVector& targets, DomainKind kind, Complex f_inf, int iprec,
                    const FastSumOptions& options) {
  const FastSumPlan plan(disc.eta, iprec, options);
  return cauchy_eval(disc, plan, boundary_values, targets, kind, f_inf);
}

}  // namespace gnk
