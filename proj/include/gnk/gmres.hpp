#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gnk/types.hpp"

namespace gnk {

struct GmresConfig {
  /// Inner iterations per cycle.
  int restart = 25;
  /// Relative residual target ||b - Ax|| / ||b||.
  double tol = 1e-12;
  /// Maximum number of restart cycles.
  int maxit = 40;

  void validate() const;
};

struct SolveReport {
  Vector solution;
  /// Relative residual after every inner iteration, preceded by the initial one
  /// of each cycle.
  std::vector<double> residual_history;
  /// Index into residual_history where each cycle starts.
  std::vector<std::size_t> cycle_starts;
  int iterations = 0;
  int matvecs = 0;
  bool converged = false;
  double relative_residual = 0.0;
  double elapsed_seconds = 0.0;
};

using LinearMap = std::function<Vector(const Vector&)>;

/// Restarted GMRES with modified Gram-Schmidt Arnoldi and Givens rotations.
/// Never throws on non-convergence; throws gnk::Error if the map returns
/// non-finite values.
SolveReport gmres_solve(const LinearMap& apply, const Vector& rhs, const GmresConfig& config,
                        const std::optional<Vector>& x0 = std::nullopt);

}  // namespace gnk
