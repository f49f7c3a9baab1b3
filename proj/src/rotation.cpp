#include "skewlab/rotation.hpp"

#include "skewlab/errors.hpp"

#include <cmath>
#include <string>

namespace skewlab {

double smoothstep(double s) noexcept {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double smoothstep_deriv(double s) noexcept {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double t = s * (1.0 - s);
  return 30.0 * t * t;
}

namespace {
// |psi'(r)| r = 30 s^2 (1-s)^2 (2-s) with s = (2 rho - r) / rho; maximised at
// the root of 5s^2 - 11s + 4 in (0, 1).
double max_shear() {
  const double s = (11.0 - std::sqrt(41.0)) / 10.0;
  const double t = s * (1.0 - s);
  return 30.0 * t * t * (2.0 - s);
}

Mat2 rot(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}
}  // namespace

const double kMaxShear = max_shear();

double max_safe_angle() noexcept { return 0.9 / kMaxShear; }

LocalizedRotation::LocalizedRotation(TorusPoint2 center, double rho, double theta)
    : center_(center), bump_{rho}, theta_(theta) {
  if (!(rho > 0.0) || !(2.0 * rho < 0.5))
    throw InvalidArgument("rotation radius must satisfy 0 < 2*rho < 1/2, got rho=" +
                          std::to_string(rho));
  if (!(std::abs(theta) < std::numbers::pi))
    throw InvalidArgument("rotation angle must lie in (-pi, pi)");
  if (!(std::abs(theta) * kMaxShear < 0.9))
    throw InvalidArgument("rotation angle " + std::to_string(theta) +
                          " exceeds the shear safety bound " + std::to_string(max_safe_angle()));
}

bool LocalizedRotation::outside(const TorusPoint2& y) const noexcept {
  const Vec2 d = displacement(center_, y);
  return d.norm() >= bump_.support();
}

TorusPoint2 LocalizedRotation::apply(const TorusPoint2& y, double scale) const {
  const Vec2 d = displacement(center_, y);
  const double r = d.norm();
  if (r >= bump_.support()) return y;
  const double phi = scale * theta_ * bump_.value(r);
  if (phi == 0.0) return y;
  return center_.shifted(rot(phi) * d);
}

Mat2 LocalizedRotation::jacobian(const TorusPoint2& y, double scale) const {
  const Vec2 d = displacement(center_, y);
  const double r = d.norm();
  if (r >= bump_.support()) return Mat2::Identity();
  const double phi = scale * theta_ * bump_.value(r);
  Mat2 inner = Mat2::Identity();
  if (r > bump_.rho) {
    const Vec2 jd(-d.y(), d.x());
    inner += (scale * theta_ * bump_.deriv(r) / r) * jd * d.transpose();
  }
  return rot(phi) * inner;
}

Vec2 LocalizedRotation::d_scale(const TorusPoint2& y, double scale) const {
  const Vec2 d = displacement(center_, y);
  const double r = d.norm();
  if (r >= bump_.support()) return Vec2::Zero();
  const double w = theta_ * bump_.value(r);
  return rot(scale * w) * Vec2(-d.y(), d.x()) * w;
}

bool RotationChain::is_identity() const noexcept {
  for (const auto& r : rotations_)
    if (r.theta() != 0.0) return false;
  return true;
}

TorusPoint2 RotationChain::apply(const TorusPoint2& y, double scale) const {
  TorusPoint2 z = y;
  for (const auto& r : rotations_) z = r.apply(z, scale);
  return z;
}

TorusPoint2 RotationChain::inverse(const TorusPoint2& y, double scale) const {
  TorusPoint2 z = y;
  for (auto it = rotations_.rbegin(); it != rotations_.rend(); ++it) z = it->inverse(z, scale);
  return z;
}

RotationChain::Eval RotationChain::evaluate(const TorusPoint2& y, double scale,
                                            bool inverse) const {
  Eval e{y, Mat2::Identity(), Vec2::Zero()};
  const double s = inverse ? -scale : scale;
  // inverse(y, scale) = reversed chain at scale -scale, so d/dscale flips sign
  const double sign = inverse ? -1.0 : 1.0;
  auto step = [&](const LocalizedRotation& r) {
    const Mat2 j = r.jacobian(e.point, s);
    e.d_scale = j * e.d_scale + sign * r.d_scale(e.point, s);
    e.jac = j * e.jac;
    e.point = r.apply(e.point, s);
  };
  if (inverse) {
    for (auto it = rotations_.rbegin(); it != rotations_.rend(); ++it) step(*it);
  } else {
    for (const auto& r : rotations_) step(r);
  }
  return e;
}

}  // namespace skewlab
