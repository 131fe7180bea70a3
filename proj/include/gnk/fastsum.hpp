#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <vector>

#include "gnk/types.hpp"

namespace gnk {

/// Requested accuracy class 1..5 mapped to the relative tolerance
/// {0.5e-3, 0.5e-6, 0.5e-9, 0.5e-12, 0.5e-15}.
double fastsum_tolerance(int iprec);

struct FastSumOptions {
  /// Maximum number of points in a leaf cell.
  int leaf_size = 30;
  /// Point counts below this use direct summation unless force_fast is set.
  Index direct_threshold = 2048;
  bool force_fast = false;
  bool force_direct = false;
  /// Multipole acceptance ratio (R_target + R_source) / distance.
  double separation = 0.5;
  /// Expansion order; 0 selects it from the tolerance.
  int expansion_order = 0;
};

/// Direct O(N^2) sums; the reference the hierarchical path is checked against.
/// result_i = sum_{j != i} x_j / (z_i - z_j)
CVector direct_e_matvec(const CVector& points, const CVector& x);
/// result_i = sum_j x_j / (targets_i - z_j)
CVector direct_f_matvec(const CVector& points, const CVector& x, const CVector& targets);

namespace detail {
struct QuadTree;
}

/// Hierarchical summation plan for Cauchy-kernel sums over a fixed source set.
///
/// The plan depends only on the points and the accuracy class; weights are
/// supplied per matvec. Sources are reordered along an adaptive quadtree whose
/// cells carry Laurent (multipole) and Taylor (local) expansions, interacting
/// through a dual tree traversal.
class FastSumPlan {
 public:
  FastSumPlan(const CVector& points, int iprec, FastSumOptions options = {});
  ~FastSumPlan();
  FastSumPlan(FastSumPlan&&) noexcept;
  FastSumPlan& operator=(FastSumPlan&&) noexcept;

  /// result_i = sum_{j != i} x_j / (z_i - z_j)
  CVector e_matvec(const CVector& x) const;
  /// result_i = sum_j x_j / (targets_i - z_j). Targets closer than
  /// max(exclusion, 1e-14 * diameter) to a source are rejected.
  CVector f_matvec(const CVector& x, const CVector& targets, double exclusion = 0.0) const;

  Index size() const { return points_.size(); }
  int iprec() const { return iprec_; }
  double tolerance() const { return fastsum_tolerance(iprec_); }
  bool uses_fast_path() const { return tree_ != nullptr; }
  int expansion_order() const { return order_; }
  const CVector& points() const { return points_; }
  /// Number of e_matvec/f_matvec calls served so far.
  std::size_t matvec_count() const { return calls_->load(); }

 private:
  CVector points_;
  int iprec_;
  FastSumOptions options_;
  int order_ = 0;
  double min_separation_ = 0.0;
  std::unique_ptr<detail::QuadTree> tree_;
  std::unique_ptr<std::atomic<std::size_t>> calls_;
};

}  // namespace gnk
