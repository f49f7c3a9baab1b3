#pragma once

// Flat 2-torus geometry, integer toral automorphisms and projective
// directions. Everything here is pure and stateless.

#include <Eigen/Core>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace skewlab {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix4d;

/// Reduce a finite real into [0, 1). Idempotent on its image.
inline double wrap_unit(double v) noexcept {
  double r = v - std::floor(v);
  // tiny negatives round up to exactly 1
  return r >= 1.0 ? 0.0 : r;
}

/// Shortest signed representative of a coordinate difference, in [-1/2, 1/2].
inline double wrap_delta(double d) noexcept {
  return d - std::nearbyint(d);
}

/// A point of T^2 with both coordinates in [0, 1).
class TorusPoint2 {
 public:
  constexpr TorusPoint2() = default;
  /// Wraps (x, y) into the fundamental domain; throws InvalidArgument on
  /// non-finite input.
  TorusPoint2(double x, double y);

  /// Trusted constructor for coordinates already in [0, 1).
  static constexpr TorusPoint2 reduced(double x, double y) noexcept {
    TorusPoint2 p;
    p.x_ = x;
    p.y_ = y;
    return p;
  }

  constexpr double x() const noexcept { return x_; }
  constexpr double y() const noexcept { return y_; }
  Vec2 vec() const { return {x_, y_}; }

  /// Translate by a displacement and wrap.
  TorusPoint2 shifted(const Vec2& d) const { return {x_ + d.x(), y_ + d.y()}; }

  friend constexpr bool operator==(const TorusPoint2&, const TorusPoint2&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
};

/// Signed shortest displacement from `from` to `to`.
inline Vec2 displacement(const TorusPoint2& from, const TorusPoint2& to) {
  return {wrap_delta(to.x() - from.x()), wrap_delta(to.y() - from.y())};
}

TorusPoint2 wrap(double x, double y);

/// Flat-torus distance, per-coordinate shortest representative. At most sqrt(1/2).
double torus_dist(const TorusPoint2& p, const TorusPoint2& q) noexcept;

struct TorusPoint4 {
  TorusPoint2 base;
  TorusPoint2 fiber;
  friend constexpr bool operator==(const TorusPoint4&, const TorusPoint4&) = default;
};

double torus_dist(const TorusPoint4& p, const TorusPoint4& q) noexcept;

/// Integer 2x2 matrix used as a linear toral automorphism; |det| = 1 is
/// enforced at construction.
class IntMatrix2 {
 public:
  IntMatrix2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

  /// Identity.
  IntMatrix2() : IntMatrix2(1, 0, 0, 1) {}

  std::int64_t a() const noexcept { return a_; }
  std::int64_t b() const noexcept { return b_; }
  std::int64_t c() const noexcept { return c_; }
  std::int64_t d() const noexcept { return d_; }
  std::int64_t det() const noexcept { return a_ * d_ - b_ * c_; }
  std::int64_t trace() const noexcept { return a_ + d_; }

  IntMatrix2 inverse() const;
  IntMatrix2 power(int n) const;
  Mat2 as_real() const;

  /// Action on T^2; evaluated as (a*x + b*y, c*x + d*y) then wrapped.
  TorusPoint2 act(const TorusPoint2& p) const noexcept {
    const double u = double(a_) * p.x() + double(b_) * p.y();
    const double v = double(c_) * p.x() + double(d_) * p.y();
    return TorusPoint2::reduced(wrap_unit(u), wrap_unit(v));
  }

  friend IntMatrix2 operator*(const IntMatrix2& l, const IntMatrix2& r);
  friend bool operator==(const IntMatrix2&, const IntMatrix2&) = default;

 private:
  std::int64_t a_, b_, c_, d_;
};

/// An element of the projective line: an angle in [0, pi).
class Direction {
 public:
  static constexpr double kDefaultTol = 1e-9;

  constexpr Direction() = default;
  explicit Direction(double angle);

  static Direction from_vector(const Vec2& v);

  double angle() const noexcept { return angle_; }
  Vec2 unit() const { return {std::cos(angle_), std::sin(angle_)}; }

  /// Projective distance in [0, pi/2].
  double distance(const Direction& other) const noexcept;
  /// Angle of `other` relative to this one, in (-pi/2, pi/2].
  double signed_offset(const Direction& other) const noexcept;
  bool approx_equal(const Direction& other, double tol = kDefaultTol) const noexcept {
    return distance(other) <= tol;
  }

 private:
  double angle_ = 0.0;
};

/// Projective reduction of an arbitrary real angle into [0, pi).
double reduce_angle(double a) noexcept;

struct EigenSplit {
  double lambda_u;  // > 1
  double lambda_s;  // in (0, 1), modulus of the contracting eigenvalue
  double sign_u;    // sign of the expanding eigenvalue
  double sign_s;
  Vec2 vec_u;       // unit eigenvectors
  Vec2 vec_s;
  Direction dir_u;
  Direction dir_s;
};

/// Eigen-data of a hyperbolic automorphism. Throws NotHyperbolic when some
/// eigenvalue has modulus one.
EigenSplit hyperbolic_eigensplit(const IntMatrix2& m);

/// Projective class of J v. Throws SingularMatrix on singular J.
Direction push_direction(const Mat2& jac, const Direction& v);

/// Angle between two lines in R^n spanned by (not necessarily unit) vectors.
template <class V>
double line_angle(const V& u, const V& v) {
  const double nu = u.norm(), nv = v.norm();
  const double c = std::abs(u.dot(v)) / (nu * nv);
  const double s = (u / nu - (u.dot(v) >= 0 ? 1.0 : -1.0) * v / nv).norm();
  // chord length of the nearer pair of unit representatives
  return c > 0.7 ? 2.0 * std::asin(std::min(1.0, s / 2.0)) : std::acos(std::min(1.0, c));
}

}  // namespace skewlab
