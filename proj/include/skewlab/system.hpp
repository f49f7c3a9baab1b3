#pragma once

// Rigid skew products f(p1, p2) = (M p1, A Phi(p1, p2)) on T^2 x T^2, where
// Phi is a composition of base-gated fiber perturbations.

#include "skewlab/kernels.hpp"
#include "skewlab/rotation.hpp"
#include "skewlab/torus.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace skewlab {

/// Bump weight on the base: 1 at the center, 0 outside B(center, 2 radius).
struct BaseGate {
  TorusPoint2 center;
  double radius;

  double weight(const TorusPoint2& p) const noexcept;
  /// Gradient of weight() with respect to p.
  Vec2 grad(const TorusPoint2& p) const noexcept;
  double support() const noexcept { return 2.0 * radius; }
  bool outside(const TorusPoint2& p) const noexcept;
};

/// y -> chain(y) with every angle multiplied by the gate weight.
struct FiberPerturbation {
  BaseGate gate;
  RotationChain rotations;
};

class SkewProductSystem;

/// Gated holonomy conjugation T_{u->i} o h(beta)^{-1} o T_{i->u}, where T are
/// depth-`depth` unstable transports of `reference` between the fiber over
/// the anchor and the fiber over anchor + t e_u. With a direct-product
/// reference both transports are the identity.
struct HolonomyConjugation {
  BaseGate gate;
  RotationChain h;
  std::shared_ptr<const SkewProductSystem> reference;
  TorusPoint2 anchor;
  double t = 0.0;
  int depth = 0;
};

using Perturbation = std::variant<FiberPerturbation, HolonomyConjugation>;

struct FiberEval {
  TorusPoint2 point;
  Mat2 d_fiber;  // derivative in the fiber coordinate
  Mat2 d_base;   // derivative in the base coordinate
};

class SkewProductSystem {
 public:
  /// Checks hyperbolicity of both matrices and, unless `check_domination`
  /// is false, that the fiber is dominated by the base.
  SkewProductSystem(IntMatrix2 base, IntMatrix2 fiber, std::vector<Perturbation> perturbations = {},
                    bool check_domination = true);

  const IntMatrix2& base() const noexcept { return base_; }
  const IntMatrix2& fiber_linear() const noexcept { return fiber_; }
  const std::vector<Perturbation>& perturbations() const noexcept { return perturbations_; }
  const EigenSplit& base_split() const noexcept { return base_split_; }
  const EigenSplit& fiber_split() const noexcept { return fiber_split_; }

  /// True when no perturbation can act (empty list or all angles zero).
  bool is_product() const noexcept { return product_; }

  /// Same matrices, one more perturbation. It becomes the innermost map
  /// (applied to the fiber before all existing ones).
  SkewProductSystem with_perturbation(Perturbation p) const;

  TorusPoint4 apply(const TorusPoint4& p) const;
  TorusPoint4 apply_inverse(const TorusPoint4& p) const;

  /// Fiber map y -> f2(p1, y) and its inverse.
  TorusPoint2 fiber_map(const TorusPoint2& p1, const TorusPoint2& y) const;
  TorusPoint2 fiber_inverse(const TorusPoint2& p1, const TorusPoint2& z) const;
  /// Phi(p1, .) alone, without the linear part.
  TorusPoint2 perturbation_map(const TorusPoint2& p1, const TorusPoint2& y) const;

  /// f2(p1, y) with both partial derivatives.
  FiberEval fiber_eval(const TorusPoint2& p1, const TorusPoint2& y) const;
  Mat2 fiber_jacobian(const TorusPoint2& p1, const TorusPoint2& y) const {
    return fiber_eval(p1, y).d_fiber;
  }

  /// Full 4x4 derivative [[M, 0], [d f2/d p1, d f2/d p2]].
  Mat4 jacobian(const TorusPoint4& p) const;

  /// In-place forward step of a batch; bit-identical to apply() per point.
  void apply_batch(kernels::PointBatch& batch, std::size_t begin, std::size_t end,
                   const kernels::KernelTable& table = kernels::active()) const;

  /// Stable textual description used for hashing and manifests.
  std::string describe() const;
  std::uint64_t hash() const;

 private:
  IntMatrix2 base_;
  IntMatrix2 fiber_;
  IntMatrix2 base_inv_;
  IntMatrix2 fiber_inv_;
  std::vector<Perturbation> perturbations_;
  EigenSplit base_split_;
  EigenSplit fiber_split_;
  bool product_;
  bool check_domination_;
  kernels::LinearStep step_;
};

/// Perturbation-free system; throws DominationViolated unless
/// lambda_u(fiber) < lambda_u(base).
SkewProductSystem make_product(const IntMatrix2& base, const IntMatrix2& fiber);

/// Same, skipping the domination check (used to diagnose out-of-class input).
SkewProductSystem make_product_unchecked(const IntMatrix2& base, const IntMatrix2& fiber);

/// The base matrix [[89,55],[55,34]] = A^5 and fiber A = [[2,1],[1,1]].
IntMatrix2 cat_matrix();
SkewProductSystem example_system();

std::uint64_t fnv1a64(std::string_view data) noexcept;

}  // namespace skewlab
