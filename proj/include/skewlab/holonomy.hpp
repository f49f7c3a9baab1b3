#pragma once

// Strong unstable / strong stable holonomies between center fibers, computed
// as limits of finite-time compositions along base orbits, using the product
// trivialization to identify fibers.

#include "skewlab/system.hpp"

#include <vector>

namespace skewlab {

enum class Leaf { unstable, stable };

struct HolonomyOptions {
  double tol = 1e-9;
  int max_depth = 60;
  int min_depth = 3;  // raised per call to the depth where the linear tail bound is below tol
};

struct HolonomyResult {
  TorusPoint2 point;
  int depth = 0;
  std::vector<double> increments;  // increments[k] = dist(H_{k+1}, H_k)
  bool converged = false;          // last increment below tol
  bool certified = false;          // converged and last three increments nonincreasing
};

/// Parameter t with q = p + t e (e the unit base eigenvector of `leaf`),
/// taking the lift of smallest |t| among those with |t| <= max_t and
/// transverse error below 1e-10. Throws NotOnLeaf otherwise.
double leaf_parameter(const SkewProductSystem& f, Leaf leaf, const TorusPoint2& p,
                      const TorusPoint2& q, double max_t = 8.0);

/// Base point p + t e for the chosen leaf.
TorusPoint2 leaf_point(const SkewProductSystem& f, Leaf leaf, const TorusPoint2& p, double t);

/// Depth-n approximant transporting fiber point x from the fiber over
/// anchor + t_from e to the fiber over anchor + t_to e. For unstable leaves
/// the composition runs n steps backward along the first and forward along
/// the second; for stable leaves the roles are swapped.
struct Transport {
  TorusPoint2 point;
  Mat2 jac;
};
Transport transport(const SkewProductSystem& f, Leaf leaf, const TorusPoint2& anchor,
                    double t_from, double t_to, const TorusPoint2& x, int depth,
                    bool with_jacobian = false);

/// Adaptive holonomy between parameters along one base leaf.
HolonomyResult holonomy_along(const SkewProductSystem& f, Leaf leaf, const TorusPoint2& anchor,
                              double t_from, double t_to, const TorusPoint2& x,
                              const HolonomyOptions& opt = {});

/// H^u from the fiber over p1 to the fiber over q1 (q1 on the unstable line of p1).
HolonomyResult u_holonomy(const SkewProductSystem& f, const TorusPoint2& p1,
                          const TorusPoint2& q1, const TorusPoint2& x,
                          const HolonomyOptions& opt = {});
HolonomyResult s_holonomy(const SkewProductSystem& f, const TorusPoint2& p1,
                          const TorusPoint2& q1, const TorusPoint2& x,
                          const HolonomyOptions& opt = {});

/// DH^u at x, evaluated at the depth where u_holonomy stops.
struct HolonomyJacobian {
  Mat2 jac;
  HolonomyResult value;
};
HolonomyJacobian u_holonomy_jacobian(const SkewProductSystem& f, const TorusPoint2& p1,
                                     const TorusPoint2& q1, const TorusPoint2& x,
                                     const HolonomyOptions& opt = {});
HolonomyJacobian holonomy_jacobian_along(const SkewProductSystem& f, Leaf leaf,
                                         const TorusPoint2& anchor, double t_from, double t_to,
                                         const TorusPoint2& x, const HolonomyOptions& opt = {});

struct LeafSample {
  double t;
  TorusPoint4 point;
  int depth;
  bool certified;
};

/// Points of W^uu(p) over p.base + t e_u.
std::vector<LeafSample> sample_uu_leaf(const SkewProductSystem& f, const TorusPoint4& p,
                                       const std::vector<double>& t_values,
                                       const HolonomyOptions& opt = {});

/// Least-squares slope of log(increment) versus depth, as a ratio, over the
/// run from the largest entry up to the first entry at or below `floor`
/// (deeper entries are roundoff). NaN with fewer than two usable points.
double fit_geometric_ratio(const std::vector<double>& increments, double floor = 1e-12);

/// Holonomies out of one source fiber, bound to fixed options.
class HolonomyEvaluator {
 public:
  HolonomyEvaluator(std::shared_ptr<const SkewProductSystem> f, TorusPoint2 source,
                    TorusPoint2 target, Leaf leaf = Leaf::unstable, HolonomyOptions opt = {});

  HolonomyResult operator()(const TorusPoint2& x) const;
  HolonomyJacobian with_jacobian(const TorusPoint2& x) const;
  double parameter() const noexcept { return t_; }
  const SkewProductSystem& system() const noexcept { return *f_; }

 private:
  std::shared_ptr<const SkewProductSystem> f_;
  TorusPoint2 source_;
  Leaf leaf_;
  HolonomyOptions opt_;
  double t_;
};

}  // namespace skewlab
