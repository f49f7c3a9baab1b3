#include "skewlab/holonomy.hpp"

#include "skewlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace skewlab {
namespace {

struct LeafData {
  Vec2 e;
  double mu;  // signed eigenvalue of the base along e
};

LeafData leaf_data(const SkewProductSystem& f, Leaf leaf) {
  const EigenSplit& s = f.base_split();
  if (leaf == Leaf::unstable) return {s.vec_u, s.sign_u * s.lambda_u};
  return {s.vec_s, s.sign_s * s.lambda_s};
}

// Increments below this are roundoff; they count as equal when checking
// monotonicity.
double roundoff_floor(const HolonomyOptions& opt) { return std::max(1e-15, 1e-3 * opt.tol); }

// Depth below which small increments prove nothing: a base orbit that has
// not met a perturbation yet gives roundoff-size increments. The tail after
// depth n is about |t| r^n with r = lambda_fiber^2 / lambda_base.
int a_priori_depth(const SkewProductSystem& f, Leaf leaf, double span, double tol) {
  if (f.is_product() || span == 0.0) return 0;
  const double lb = leaf == Leaf::unstable ? f.base_split().lambda_u : 1.0 / f.base_split().lambda_s;
  const double lf = std::max(f.fiber_split().lambda_u, 1.0 / f.fiber_split().lambda_s);
  const double r = lf * lf / lb;
  if (!(r < 1.0)) return 0;
  return int(std::ceil(std::log(tol / std::abs(span)) / std::log(r)));
}

}  // namespace

double leaf_parameter(const SkewProductSystem& f, Leaf leaf, const TorusPoint2& p,
                      const TorusPoint2& q, double max_t) {
  const Vec2 e = leaf_data(f, leaf).e;
  const Vec2 d = displacement(p, q);
  const int k_max = int(std::ceil(max_t)) + 1;
  double best = std::numeric_limits<double>::infinity();
  for (int i = -k_max; i <= k_max; ++i) {
    for (int j = -k_max; j <= k_max; ++j) {
      const Vec2 w = d + Vec2(i, j);
      const double t = w.dot(e);
      const double transverse = (w - t * e).norm();
      if (transverse < 1e-10 && std::abs(t) <= max_t && std::abs(t) < std::abs(best)) best = t;
    }
  }
  if (!std::isfinite(best))
    throw NotOnLeaf("base point is not on the " +
                    std::string(leaf == Leaf::unstable ? "unstable" : "stable") +
                    " line through the source within |t| <= " + std::to_string(max_t));
  return best;
}

TorusPoint2 leaf_point(const SkewProductSystem& f, Leaf leaf, const TorusPoint2& p, double t) {
  return p.shifted(t * leaf_data(f, leaf).e);
}

Transport transport(const SkewProductSystem& f, Leaf leaf, const TorusPoint2& anchor,
                    double t_from, double t_to, const TorusPoint2& x, int depth,
                    bool with_jacobian) {
  Transport out{x, Mat2::Identity()};
  if (depth <= 0 || t_from == t_to) return out;
  const LeafData ld = leaf_data(f, leaf);
  const std::size_t n = std::size_t(depth);

  // Base pseudo-orbit of the anchor: backward for unstable, forward for stable.
  std::vector<TorusPoint2> a(n + 1);
  std::vector<double> scale(n + 1);
  a[0] = anchor;
  scale[0] = 1.0;
  const IntMatrix2 step = leaf == Leaf::unstable ? f.base().inverse() : f.base();
  for (std::size_t k = 1; k <= n; ++k) {
    a[k] = step.act(a[k - 1]);
    scale[k] = leaf == Leaf::unstable ? scale[k - 1] / ld.mu : scale[k - 1] * ld.mu;
  }
  auto along = [&](double t, std::size_t k) { return a[k].shifted((scale[k] * t) * ld.e); };

  TorusPoint2 z = x;
  Mat2 j = Mat2::Identity();
  if (leaf == Leaf::unstable) {
    for (std::size_t k = 1; k <= n; ++k) {
      const TorusPoint2 b = along(t_from, k);
      z = f.fiber_inverse(b, z);
      if (with_jacobian) j = f.fiber_jacobian(b, z).inverse() * j;
    }
    for (std::size_t k = n; k >= 1; --k) {
      const TorusPoint2 b = along(t_to, k);
      if (with_jacobian) j = f.fiber_jacobian(b, z) * j;
      z = f.fiber_map(b, z);
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      const TorusPoint2 b = along(t_from, k);
      if (with_jacobian) j = f.fiber_jacobian(b, z) * j;
      z = f.fiber_map(b, z);
    }
    for (std::size_t k = n; k-- > 0;) {
      const TorusPoint2 b = along(t_to, k);
      z = f.fiber_inverse(b, z);
      if (with_jacobian) j = f.fiber_jacobian(b, z).inverse() * j;
    }
  }
  out.point = z;
  out.jac = j;
  return out;
}

HolonomyResult holonomy_along(const SkewProductSystem& f, Leaf leaf, const TorusPoint2& anchor,
                              double t_from, double t_to, const TorusPoint2& x,
                              const HolonomyOptions& opt) {
  HolonomyResult r;
  r.point = x;
  if (t_from == t_to) {
    r.converged = r.certified = true;
    return r;
  }
  TorusPoint2 prev = x;
  const int min_depth = std::max(opt.min_depth, a_priori_depth(f, leaf, t_to - t_from, opt.tol));
  for (int n = 1; n <= opt.max_depth; ++n) {
    const TorusPoint2 cur = transport(f, leaf, anchor, t_from, t_to, x, n).point;
    const double inc = torus_dist(cur, prev);
    r.increments.push_back(inc);
    r.point = cur;
    r.depth = n;
    prev = cur;
    if (n >= min_depth && inc < opt.tol) {
      r.converged = true;
      const auto& v = r.increments;
      const std::size_t m = v.size();
      const double fl = roundoff_floor(opt);
      r.certified = m >= 3 && v[m - 1] <= std::max(v[m - 2], fl) &&
                    v[m - 2] <= std::max(v[m - 3], fl);
      return r;
    }
  }
  return r;
}

HolonomyResult u_holonomy(const SkewProductSystem& f, const TorusPoint2& p1,
                          const TorusPoint2& q1, const TorusPoint2& x,
                          const HolonomyOptions& opt) {
  if (p1 == q1) return holonomy_along(f, Leaf::unstable, p1, 0.0, 0.0, x, opt);
  const double t = leaf_parameter(f, Leaf::unstable, p1, q1);
  return holonomy_along(f, Leaf::unstable, p1, 0.0, t, x, opt);
}

HolonomyResult s_holonomy(const SkewProductSystem& f, const TorusPoint2& p1,
                          const TorusPoint2& q1, const TorusPoint2& x,
                          const HolonomyOptions& opt) {
  if (p1 == q1) return holonomy_along(f, Leaf::stable, p1, 0.0, 0.0, x, opt);
  const double t = leaf_parameter(f, Leaf::stable, p1, q1);
  return holonomy_along(f, Leaf::stable, p1, 0.0, t, x, opt);
}

HolonomyJacobian holonomy_jacobian_along(const SkewProductSystem& f, Leaf leaf,
                                         const TorusPoint2& anchor, double t_from, double t_to,
                                         const TorusPoint2& x, const HolonomyOptions& opt) {
  HolonomyJacobian out{Mat2::Identity(), holonomy_along(f, leaf, anchor, t_from, t_to, x, opt)};
  if (out.value.depth > 0)
    out.jac = transport(f, leaf, anchor, t_from, t_to, x, out.value.depth, true).jac;
  return out;
}

HolonomyJacobian u_holonomy_jacobian(const SkewProductSystem& f, const TorusPoint2& p1,
                                     const TorusPoint2& q1, const TorusPoint2& x,
                                     const HolonomyOptions& opt) {
  const double t = p1 == q1 ? 0.0 : leaf_parameter(f, Leaf::unstable, p1, q1);
  return holonomy_jacobian_along(f, Leaf::unstable, p1, 0.0, t, x, opt);
}

std::vector<LeafSample> sample_uu_leaf(const SkewProductSystem& f, const TorusPoint4& p,
                                       const std::vector<double>& t_values,
                                       const HolonomyOptions& opt) {
  std::vector<LeafSample> out;
  out.reserve(t_values.size());
  for (double t : t_values) {
    const HolonomyResult h = holonomy_along(f, Leaf::unstable, p.base, 0.0, t, p.fiber, opt);
    const TorusPoint2 b = t == 0.0 ? p.base : leaf_point(f, Leaf::unstable, p.base, t);
    out.push_back({t, {b, h.point}, h.depth, h.certified});
  }
  return out;
}

double fit_geometric_ratio(const std::vector<double>& increments, double floor) {
  // decaying run: from the largest entry up to the first one at or below floor
  const auto peak = std::max_element(increments.begin(), increments.end());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (auto it = peak; it != increments.end() && *it > floor; ++it) {
    const double x = double(it - increments.begin()), y = std::log(*it);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return std::exp(slope);
}

HolonomyEvaluator::HolonomyEvaluator(std::shared_ptr<const SkewProductSystem> f,
                                     TorusPoint2 source, TorusPoint2 target, Leaf leaf,
                                     HolonomyOptions opt)
    : f_(std::move(f)), source_(source), leaf_(leaf), opt_(opt) {
  t_ = source == target ? 0.0 : leaf_parameter(*f_, leaf, source, target);
}

HolonomyResult HolonomyEvaluator::operator()(const TorusPoint2& x) const {
  return holonomy_along(*f_, leaf_, source_, 0.0, t_, x, opt_);
}

HolonomyJacobian HolonomyEvaluator::with_jacobian(const TorusPoint2& x) const {
  return holonomy_jacobian_along(*f_, leaf_, source_, 0.0, t_, x, opt_);
}

}  // namespace skewlab
