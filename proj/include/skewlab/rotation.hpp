#pragma once

#include "skewlab/torus.hpp"

#include <vector>

namespace skewlab {

/// Quintic smoothstep 10s^3 - 15s^4 + 6s^5 clamped to [0, 1]; C2 at both ends.
double smoothstep(double s) noexcept;
double smoothstep_deriv(double s) noexcept;

/// Radial bump: 1 on [0, rho], 0 on [2 rho, inf), smoothstep in between.
struct RadialBump {
  double rho;
  double value(double r) const noexcept { return smoothstep((2.0 * rho - r) / rho); }
  double deriv(double r) const noexcept { return -smoothstep_deriv((2.0 * rho - r) / rho) / rho; }
  double support() const noexcept { return 2.0 * rho; }
};

/// sup over the annulus of |psi'(r)| r, independent of rho.
extern const double kMaxShear;

/// Rotation about `center` by angle theta * psi(r), r the distance to the
/// center. The effective angle is additionally multiplied by a caller scale
/// (the base gate weight).
class LocalizedRotation {
 public:
  LocalizedRotation(TorusPoint2 center, double rho, double theta);

  const TorusPoint2& center() const noexcept { return center_; }
  double rho() const noexcept { return bump_.rho; }
  double theta() const noexcept { return theta_; }
  double support_radius() const noexcept { return bump_.support(); }

  /// True when y lies outside the closed support where the map is identity.
  bool outside(const TorusPoint2& y) const noexcept;

  TorusPoint2 apply(const TorusPoint2& y, double scale = 1.0) const;
  TorusPoint2 inverse(const TorusPoint2& y, double scale = 1.0) const {
    return apply(y, -scale);
  }

  /// D_y of apply(., scale) at y.
  Mat2 jacobian(const TorusPoint2& y, double scale = 1.0) const;

  /// Derivative of apply(y, s) with respect to s.
  Vec2 d_scale(const TorusPoint2& y, double scale = 1.0) const;

 private:
  TorusPoint2 center_;
  RadialBump bump_;
  double theta_;
};

/// Largest |theta| accepted by the construction safety check.
double max_safe_angle() noexcept;

/// Composition of localized rotations applied in list order: the first
/// element acts first.
class RotationChain {
 public:
  RotationChain() = default;
  explicit RotationChain(std::vector<LocalizedRotation> rotations)
      : rotations_(std::move(rotations)) {}

  const std::vector<LocalizedRotation>& rotations() const noexcept { return rotations_; }
  bool empty() const noexcept { return rotations_.empty(); }
  bool is_identity() const noexcept;

  TorusPoint2 apply(const TorusPoint2& y, double scale = 1.0) const;
  TorusPoint2 inverse(const TorusPoint2& y, double scale = 1.0) const;

  struct Eval {
    TorusPoint2 point;
    Mat2 jac;      // D_y
    Vec2 d_scale;  // d/ds
  };
  /// Value, Jacobian and scale derivative of apply (or of inverse).
  Eval evaluate(const TorusPoint2& y, double scale, bool inverse = false) const;

 private:
  std::vector<LocalizedRotation> rotations_;
};

}  // namespace skewlab
