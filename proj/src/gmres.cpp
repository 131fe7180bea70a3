#include "gnk/gmres.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace gnk {

void GmresConfig::validate() const {
  if (restart < 1) throw Error("gmres: restart must be >= 1");
  if (!(tol > 0.0)) throw Error("gmres: tol must be positive");
  if (maxit < 1) throw Error("gmres: maxit must be >= 1");
}

namespace {

Vector checked_apply(const LinearMap& apply, const Vector& v, int& matvecs) {
  Vector w = apply(v);
  ++matvecs;
  if (w.size() != v.size()) throw Error("gmres: matvec changed the vector length");
  if (!w.allFinite()) throw Error("gmres: matvec returned NaN or Inf");
  return w;
}

}  // namespace

SolveReport gmres_solve(const LinearMap& apply, const Vector& rhs, const GmresConfig& config,
                        const std::optional<Vector>& x0) {
  config.validate();
  if (!rhs.allFinite()) throw Error("gmres: right-hand side is not finite");
  const auto start = std::chrono::steady_clock::now();
  const Index n = rhs.size();

  SolveReport rep;
  Vector x = x0 ? *x0 : Vector::Zero(n);
  if (x.size() != n) throw Error("gmres: initial guess has the wrong length");
  const double bnorm = rhs.norm();
  auto finish = [&](SolveReport& r) {
    r.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  };
  if (bnorm == 0.0) {
    rep.solution = Vector::Zero(n);
    rep.residual_history = {0.0};
    rep.cycle_starts = {0};
    rep.converged = true;
    return finish(rep);
  }

  const int m = config.restart;
  Matrix V(n, m + 1);
  Matrix H = Matrix::Zero(m + 1, m);
  Vector cs(m), sn(m), g(m + 1);
  Vector best_x = x;
  double best_rel = std::numeric_limits<double>::infinity();
  bool zero_guess = !x0 || x.isZero(0.0);

  auto residual = [&](const Vector& xv) -> Vector {
    if (zero_guess) return rhs;
    return rhs - checked_apply(apply, xv, rep.matvecs);
  };

  for (int cycle = 0;; ++cycle) {
    Vector r = residual(x);
    zero_guess = false;
    const double beta = r.norm();
    const double rel = beta / bnorm;
    rep.cycle_starts.push_back(rep.residual_history.size());
    rep.residual_history.push_back(rel);
    if (rel < best_rel) {
      best_rel = rel;
      best_x = x;
    }
    if (rel <= config.tol) {
      rep.converged = true;
      break;
    }
    if (cycle == config.maxit) break;

    H.setZero();
    g.setZero();
    g[0] = beta;
    V.col(0) = r / beta;
    int used = 0;
    for (int j = 0; j < m; ++j) {
      Vector w = checked_apply(apply, V.col(j), rep.matvecs);
      const double norm0 = w.norm();
      for (int i = 0; i <= j; ++i) {
        const double h = V.col(i).dot(w);
        H(i, j) = h;
        w -= h * V.col(i);
      }
      if (w.norm() < norm0 / std::sqrt(2.0)) {
        for (int i = 0; i <= j; ++i) {
          const double h = V.col(i).dot(w);
          H(i, j) += h;
          w -= h * V.col(i);
        }
      }
      const double hnext = w.norm();
      H(j + 1, j) = hnext;
      for (int i = 0; i < j; ++i) {
        const double a = H(i, j), b = H(i + 1, j);
        H(i, j) = cs[i] * a + sn[i] * b;
        H(i + 1, j) = -sn[i] * a + cs[i] * b;
      }
      const double rho = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = rho == 0.0 ? 1.0 : H(j, j) / rho;
      sn[j] = rho == 0.0 ? 0.0 : H(j + 1, j) / rho;
      H(j, j) = rho;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      ++rep.iterations;
      used = j + 1;
      const double est = std::abs(g[j + 1]) / bnorm;
      rep.residual_history.push_back(est);
      const bool breakdown = hnext <= 1e-14 * std::max(norm0, 1e-300);
      if (est <= config.tol || breakdown) break;
      V.col(j + 1) = w / hnext;
    }
    if (used > 0) {
      const Vector y = H.topLeftCorner(used, used)
                           .triangularView<Eigen::Upper>()
                           .solve(g.head(used));
      x += V.leftCols(used) * y;
    }
  }

  rep.solution = best_x;
  rep.relative_residual = best_rel;
  return finish(rep);
}

}  // namespace gnk
