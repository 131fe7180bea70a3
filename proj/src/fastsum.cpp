#include "gnk/fastsum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace gnk {

double fastsum_tolerance(int iprec) {
  switch (iprec) {
    case 1: return 0.5e-3;
    case 2: return 0.5e-6;
    case 3: return 0.5e-9;
    case 4: return 0.5e-12;
    case 5: return 0.5e-15;
    default: throw Error("iprec must be in 1..5");
  }
}

namespace {

// Accumulates sum_j q_j / (z - p_j) over a contiguous source range (SoA).
// When `skip` lies in [begin, end) that source is excluded.
inline void accumulate_direct(double zr, double zi, const double* xs, const double* ys,
                              const double* qr, const double* qi, Index begin, Index end,
                              double& out_r, double& out_i) {
  double ar = 0.0, ai = 0.0;
  for (Index j = begin; j < end; ++j) {
    const double dx = zr - xs[j];
    const double dy = zi - ys[j];
    const double inv = 1.0 / (dx * dx + dy * dy);
    ar += (qr[j] * dx + qi[j] * dy) * inv;
    ai += (qi[j] * dx - qr[j] * dy) * inv;
  }
  out_r += ar;
  out_i += ai;
}

// Compensated (Neumaier) variant for the reference sums.
struct Compensated {
  double sum = 0.0, carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

inline void accumulate_compensated(double zr, double zi, const double* xs, const double* ys,
                                   const double* qr, const double* qi, Index begin, Index end,
                                   Compensated& out_r, Compensated& out_i) {
  for (Index j = begin; j < end; ++j) {
    const double dx = zr - xs[j];
    const double dy = zi - ys[j];
    const double inv = 1.0 / (dx * dx + dy * dy);
    out_r.add((qr[j] * dx + qi[j] * dy) * inv);
    out_i.add((qi[j] * dx - qr[j] * dy) * inv);
  }
}

struct Soa {
  std::vector<double> x, y;
  explicit Soa(const CVector& z) : x(z.size()), y(z.size()) {
    for (Index i = 0; i < z.size(); ++i) {
      x[i] = z[i].real();
      y[i] = z[i].imag();
    }
  }
};

double diameter(const CVector& z) {
  if (z.size() == 0) return 0.0;
  const Vector re = z.real(), im = z.imag();
  return std::hypot(re.maxCoeff() - re.minCoeff(), im.maxCoeff() - im.minCoeff());
}

// Rejects pairs of points closer than tol. Sort-and-sweep along the real axis.
void check_distinct(const CVector& z, double tol) {
  std::vector<Index> order(z.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return z[a].real() < z[b].real(); });
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      if (z[order[b]].real() - z[order[a]].real() > tol) break;
      if (std::abs(z[order[b]] - z[order[a]]) <= tol)
        throw Error("duplicate source points (indices " + std::to_string(order[a]) + " and " +
                    std::to_string(order[b]) + ")");
    }
}

}  // namespace

CVector direct_e_matvec(const CVector& points, const CVector& x) {
  if (points.size() != x.size()) throw Error("direct_e_matvec: length mismatch");
  const Index n = points.size();
  const Soa p(points);
  const Vector qr = x.real(), qi = x.imag();
  CVector out(n);
  for (Index i = 0; i < n; ++i) {
    Compensated r, im;
    accumulate_compensated(p.x[i], p.y[i], p.x.data(), p.y.data(), qr.data(), qi.data(), 0, i, r,
                           im);
    accumulate_compensated(p.x[i], p.y[i], p.x.data(), p.y.data(), qr.data(), qi.data(), i + 1, n,
                           r, im);
    out[i] = {r.value(), im.value()};
  }
  return out;
}

CVector direct_f_matvec(const CVector& points, const CVector& x, const CVector& targets) {
  if (points.size() != x.size()) throw Error("direct_f_matvec: length mismatch");
  const Soa p(points);
  const Vector qr = x.real(), qi = x.imag();
  CVector out(targets.size());
  for (Index i = 0; i < targets.size(); ++i) {
    Compensated r, im;
    accumulate_compensated(targets[i].real(), targets[i].imag(), p.x.data(), p.y.data(), qr.data(),
                           qi.data(), 0, points.size(), r, im);
    out[i] = {r.value(), im.value()};
  }
  if (!out.allFinite()) throw Error("direct_f_matvec: a target coincides with a source point");
  return out;
}

// ---------------------------------------------------------------------------

namespace detail {

struct Pair {
  int target;
  int source;
};

struct InteractionLists {
  std::vector<Pair> m2l, m2p, p2l, p2p;
};

struct Cell {
  Complex center;
  double radius = 0.0;  // max distance of contained points from center
  double scale = 1.0;   // expansion scaling length
  Index begin = 0;
  Index end = 0;
  int child[4] = {-1, -1, -1, -1};
  int nchild = 0;

  bool leaf() const { return nchild == 0; }
  Index count() const { return end - begin; }
};

struct QuadTree {
  std::vector<Cell> cells;
  std::vector<Index> perm;  // tree position -> original index
  std::vector<double> x, y;
  InteractionLists self_lists;  // filled for source trees owned by a plan

  QuadTree(const CVector& pts, int leaf_size) {
    const Index n = pts.size();
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    const Vector re = pts.real(), im = pts.imag();
    const double x0 = re.minCoeff(), x1 = re.maxCoeff();
    const double y0 = im.minCoeff(), y1 = im.maxCoeff();
    const double half = 0.5 * std::max({x1 - x0, y1 - y0, 1e-300}) * (1.0 + 1e-12);
    cells.reserve(static_cast<std::size_t>(4 * n / std::max(1, leaf_size) + 16));
    cells.push_back({});
    build(pts, 0, {0.5 * (x0 + x1), 0.5 * (y0 + y1)}, half, 0, n, leaf_size, 0);
    x.resize(n);
    y.resize(n);
    for (Index i = 0; i < n; ++i) {
      x[i] = pts[perm[i]].real();
      y[i] = pts[perm[i]].imag();
    }
  }

  void build(const CVector& pts, int idx, Complex center, double half, Index begin, Index end,
             int leaf_size, int depth) {
    {
      Cell& c = cells[idx];
      c.center = center;
      c.begin = begin;
      c.end = end;
      double r = 0.0;
      for (Index i = begin; i < end; ++i) r = std::max(r, std::abs(pts[perm[i]] - center));
      c.radius = r;
      c.scale = r > 0.0 ? r : half;
    }
    if (end - begin <= leaf_size || depth >= 48) return;

    // Stable partition into quadrants: q = (x >= cx) + 2 (y >= cy).
    std::vector<Index> buckets[4];
    for (Index i = begin; i < end; ++i) {
      const Complex p = pts[perm[i]];
      const int q = (p.real() >= center.real() ? 1 : 0) + (p.imag() >= center.imag() ? 2 : 0);
      buckets[q].push_back(perm[i]);
    }
    Index pos = begin;
    Index bounds[5];
    for (int q = 0; q < 4; ++q) {
      bounds[q] = pos;
      for (Index v : buckets[q]) perm[pos++] = v;
    }
    bounds[4] = end;
    const double h2 = 0.5 * half;
    for (int q = 0; q < 4; ++q) {
      if (bounds[q + 1] == bounds[q]) continue;
      const Complex cc = center + Complex((q & 1) ? h2 : -h2, (q & 2) ? h2 : -h2);
      const int child = static_cast<int>(cells.size());
      cells.push_back({});
      Cell& parent = cells[idx];
      parent.child[parent.nchild++] = child;
      build(pts, child, cc, h2, bounds[q], bounds[q + 1], leaf_size, depth + 1);
    }
  }
};

}  // namespace detail

namespace {

using detail::Cell;
using detail::QuadTree;

using detail::InteractionLists;
using detail::Pair;

struct Traversal {
  const QuadTree& tgt;
  const QuadTree& src;
  double theta;
  int order;
  InteractionLists& lists;
  double min_gap = 0.0;

  void run(int a, int b) {
    const Cell& A = tgt.cells[a];
    const Cell& B = src.cells[b];
    const double dist = std::abs(A.center - B.center);
    if (A.radius + B.radius < theta * dist && dist - A.radius - B.radius > min_gap) {
      const double p1 = order + 1;
      const double ca = static_cast<double>(A.count()), cb = static_cast<double>(B.count());
      const double cost[4] = {p1 * p1, ca * p1, cb * p1, ca * cb};
      const int best = static_cast<int>(std::min_element(cost, cost + 4) - cost);
      auto& list = best == 0 ? lists.m2l : best == 1 ? lists.m2p : best == 2 ? lists.p2l : lists.p2p;
      list.push_back({a, b});
      return;
    }
    if (A.leaf() && B.leaf()) {
      lists.p2p.push_back({a, b});
      return;
    }
    if (B.leaf() || (!A.leaf() && A.radius >= B.radius)) {
      for (int c = 0; c < A.nchild; ++c) run(A.child[c], b);
    } else {
      for (int c = 0; c < B.nchild; ++c) run(a, B.child[c]);
    }
  }
};

class Binomials {
 public:
  explicit Binomials(int nmax) : n_(nmax + 1), c_(static_cast<std::size_t>(n_) * n_, 0.0) {
    for (int n = 0; n < n_; ++n) {
      at(n, 0) = 1.0;
      for (int k = 1; k <= n; ++k) at(n, k) = at(n - 1, k - 1) + (k <= n - 1 ? at(n - 1, k) : 0.0);
    }
  }
  double operator()(int n, int k) const { return c_[static_cast<std::size_t>(n) * n_ + k]; }

 private:
  double& at(int n, int k) { return c_[static_cast<std::size_t>(n) * n_ + k]; }
  int n_;
  std::vector<double> c_;
};

// Evaluates sum_j q_j / (z_i - p_j) for every target position of `tgt`, with the
// sources given in tree order of `src`. `self` excludes i == j (same tree).
CVector evaluate(const QuadTree& tgt, const QuadTree& src, const InteractionLists& lists,
                 const CVector& q_tree, int order, bool self, double coincide_tol) {
  const int p1 = order + 1;
  const Binomials binom(2 * order + 1);
  const std::size_t nt = tgt.x.size();
  std::vector<double> out_r(nt, 0.0), out_i(nt, 0.0);
  std::vector<double> qr(q_tree.size()), qi(q_tree.size());
  for (Index j = 0; j < q_tree.size(); ++j) {
    qr[j] = q_tree[j].real();
    qi[j] = q_tree[j].imag();
  }

  // Multipole coefficients a~_k = sum_j q_j ((p_j - c)/s)^k, formed directly
  // from the points of every source cell that needs them.
  std::vector<char> need_mp(src.cells.size(), 0);
  for (const Pair& pr : lists.m2l) need_mp[pr.source] = 1;
  for (const Pair& pr : lists.m2p) need_mp[pr.source] = 1;
  std::vector<Complex> mp(src.cells.size() * p1, 0.0);
  for (std::size_t c = 0; c < src.cells.size(); ++c) {
    if (!need_mp[c]) continue;
    const Cell& C = src.cells[c];
    Complex* a = &mp[c * p1];
    for (Index j = C.begin; j < C.end; ++j) {
      const Complex w = (Complex(src.x[j], src.y[j]) - C.center) / C.scale;
      Complex term = q_tree[j];
      for (int k = 0; k < p1; ++k) {
        a[k] += term;
        term *= w;
      }
    }
  }

  // Local coefficients b~_l, scaled so that L(z) = sum_l b~_l ((z - c)/s)^l.
  std::vector<Complex> loc(tgt.cells.size() * p1, 0.0);
  std::vector<char> has_loc(tgt.cells.size(), 0);

  std::vector<Complex> u(p1), rho(p1);
  for (const Pair& pr : lists.m2l) {
    const Cell& A = tgt.cells[pr.target];
    const Cell& B = src.cells[pr.source];
    const Complex D = A.center - B.center;
    const Complex rb = B.scale / D, ra = A.scale / D;
    const Complex* a = &mp[static_cast<std::size_t>(pr.source) * p1];
    Complex pw = 1.0;
    for (int k = 0; k < p1; ++k) {
      u[k] = a[k] * pw;
      pw *= rb;
    }
    Complex* b = &loc[static_cast<std::size_t>(pr.target) * p1];
    Complex fac = 1.0 / D;
    for (int l = 0; l < p1; ++l) {
      Complex s = 0.0;
      for (int k = 0; k < p1; ++k) s += binom(k + l, k) * u[k];
      b[l] += fac * s;
      fac *= -ra;
    }
    has_loc[pr.target] = 1;
  }

  for (const Pair& pr : lists.p2l) {
    const Cell& A = tgt.cells[pr.target];
    const Cell& B = src.cells[pr.source];
    Complex* b = &loc[static_cast<std::size_t>(pr.target) * p1];
    for (Index j = B.begin; j < B.end; ++j) {
      const Complex delta = Complex(src.x[j], src.y[j]) - A.center;
      const Complex ratio = A.scale / delta;
      Complex term = -q_tree[j] / delta;
      for (int l = 0; l < p1; ++l) {
        b[l] += term;
        term *= ratio;
      }
    }
    has_loc[pr.target] = 1;
  }

  // Local evaluation at the points of every cell holding a local expansion.
  for (std::size_t c = 0; c < tgt.cells.size(); ++c) {
    if (!has_loc[c]) continue;
    const Cell& A = tgt.cells[c];
    const Complex* b = &loc[c * p1];
    for (Index i = A.begin; i < A.end; ++i) {
      const Complex w = (Complex(tgt.x[i], tgt.y[i]) - A.center) / A.scale;
      Complex acc = b[order];
      for (int l = order - 1; l >= 0; --l) acc = acc * w + b[l];
      out_r[i] += acc.real();
      out_i[i] += acc.imag();
    }
  }

  for (const Pair& pr : lists.m2p) {
    const Cell& A = tgt.cells[pr.target];
    const Cell& B = src.cells[pr.source];
    const Complex* a = &mp[static_cast<std::size_t>(pr.source) * p1];
    for (Index i = A.begin; i < A.end; ++i) {
      const Complex inv = 1.0 / (Complex(tgt.x[i], tgt.y[i]) - B.center);
      const Complex r = B.scale * inv;
      Complex acc = a[order];
      for (int k = order - 1; k >= 0; --k) acc = acc * r + a[k];
      acc *= inv;
      out_r[i] += acc.real();
      out_i[i] += acc.imag();
    }
  }

  const double tol2 = coincide_tol * coincide_tol;
  for (const Pair& pr : lists.p2p) {
    const Cell& A = tgt.cells[pr.target];
    const Cell& B = src.cells[pr.source];
    const bool same = self && pr.target == pr.source;
    for (Index i = A.begin; i < A.end; ++i) {
      const double zr = tgt.x[i], zi = tgt.y[i];
      if (same) {
        accumulate_direct(zr, zi, src.x.data(), src.y.data(), qr.data(), qi.data(), B.begin, i,
                          out_r[i], out_i[i]);
        accumulate_direct(zr, zi, src.x.data(), src.y.data(), qr.data(), qi.data(), i + 1, B.end,
                          out_r[i], out_i[i]);
      } else {
        if (!self) {
          for (Index j = B.begin; j < B.end; ++j) {
            const double dx = zr - src.x[j], dy = zi - src.y[j];
            if (dx * dx + dy * dy <= tol2)
              throw Error("a target coincides with a source point");
          }
        }
        accumulate_direct(zr, zi, src.x.data(), src.y.data(), qr.data(), qi.data(), B.begin, B.end,
                          out_r[i], out_i[i]);
      }
    }
  }

  CVector out(nt);
  for (std::size_t i = 0; i < nt; ++i) out[tgt.perm[i]] = {out_r[i], out_i[i]};
  return out;
}

// Observed error decay is about (0.7 theta)^p for curve-supported and uniform
// point sets; two extra terms keep a margin below the tolerance.
int expansion_order_for(double tol, double theta) {
  const double p = std::ceil(std::log(tol) / std::log(0.7 * theta)) + 2.0;
  return std::max(4, static_cast<int>(p));
}

}  // namespace

FastSumPlan::FastSumPlan(const CVector& points, int iprec, FastSumOptions options)
    : points_(points),
      iprec_(iprec),
      options_(options),
      calls_(std::make_unique<std::atomic<std::size_t>>(0)) {
  const double tol = fastsum_tolerance(iprec);
  if (options_.leaf_size < 1) throw Error("leaf_size must be positive");
  if (!(options_.separation > 0.0 && options_.separation < 1.0))
    throw Error("separation ratio must lie in (0, 1)");
  if (!points_.allFinite()) throw Error("source points must be finite");
  min_separation_ = 1e-14 * diameter(points_);
  check_distinct(points_, min_separation_);
  order_ = options_.expansion_order > 0 ? options_.expansion_order
                                        : expansion_order_for(tol, options_.separation);
  const bool fast =
      !options_.force_direct && (options_.force_fast || points_.size() >= options_.direct_threshold);
  if (fast && points_.size() > 1) {
    tree_ = std::make_unique<detail::QuadTree>(points_, options_.leaf_size);
    Traversal{*tree_, *tree_, options_.separation, order_, tree_->self_lists}.run(0, 0);
  }
}

FastSumPlan::~FastSumPlan() = default;
FastSumPlan::FastSumPlan(FastSumPlan&&) noexcept = default;
FastSumPlan& FastSumPlan::operator=(FastSumPlan&&) noexcept = default;

CVector FastSumPlan::e_matvec(const CVector& x) const {
  if (x.size() != points_.size()) throw Error("e_matvec: weight length does not match the plan");
  ++*calls_;
  if (!tree_) return direct_e_matvec(points_, x);
  CVector q(x.size());
  for (Index i = 0; i < x.size(); ++i) q[i] = x[tree_->perm[i]];
  return evaluate(*tree_, *tree_, tree_->self_lists, q, order_, true, 0.0);
}

CVector FastSumPlan::f_matvec(const CVector& x, const CVector& targets, double exclusion) const {
  if (x.size() != points_.size()) throw Error("f_matvec: weight length does not match the plan");
  if (!targets.allFinite()) throw Error("f_matvec: targets must be finite");
  ++*calls_;
  if (targets.size() == 0) return CVector(0);
  const double gap = std::max(exclusion, min_separation_);
  if (!tree_) {
    for (Index i = 0; i < targets.size(); ++i)
      for (Index j = 0; j < points_.size(); ++j)
        if (std::abs(targets[i] - points_[j]) <= gap)
          throw Error("a target coincides with a source point");
    return direct_f_matvec(points_, x, targets);
  }
  const QuadTree target_tree(targets, options_.leaf_size);
  InteractionLists lists;
  Traversal{target_tree, *tree_, options_.separation, order_, lists, gap}.run(0, 0);
  CVector q(x.size());
  for (Index i = 0; i < x.size(); ++i) q[i] = x[tree_->perm[i]];
  return evaluate(target_tree, *tree_, lists, q, order_, false, gap);
}

}  // namespace gnk
