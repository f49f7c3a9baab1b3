#include "skewlab/torus.hpp"

#include "skewlab/errors.hpp"

#include <string>

namespace skewlab {

TorusPoint2::TorusPoint2(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw InvalidArgument("torus point coordinates must be finite");
  }
  x_ = wrap_unit(x);
  y_ = wrap_unit(y);
}

TorusPoint2 wrap(double x, double y) { return TorusPoint2(x, y); }

namespace {

inline double circle_gap(double a, double b) noexcept {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

}  // namespace

double torus_dist(const TorusPoint2& p, const TorusPoint2& q) noexcept {
  const double dx = circle_gap(p.x(), q.x());
  const double dy = circle_gap(p.y(), q.y());
  return std::sqrt(dx * dx + dy * dy);
}

double torus_dist(const TorusPoint4& p, const TorusPoint4& q) noexcept {
  const double a = circle_gap(p.base.x(), q.base.x());
  const double b = circle_gap(p.base.y(), q.base.y());
  const double c = circle_gap(p.fiber.x(), q.fiber.x());
  const double d = circle_gap(p.fiber.y(), q.fiber.y());
  return std::sqrt(a * a + b * b + c * c + d * d);
}

IntMatrix2::IntMatrix2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
    : a_(a), b_(b), c_(c), d_(d) {
  const std::int64_t det = a * d - b * c;
  if (det != 1 && det != -1) {
    throw InvalidArgument("toral automorphism needs |det| = 1, got det = " + std::to_string(det));
  }
}

IntMatrix2 IntMatrix2::inverse() const {
  const std::int64_t s = det();
  return {s * d_, -s * b_, -s * c_, s * a_};
}

IntMatrix2 IntMatrix2::power(int n) const {
  IntMatrix2 base = n < 0 ? inverse() : *this;
  IntMatrix2 out;
  for (int k = 0; k < std::abs(n); ++k) out = out * base;
  return out;
}

Mat2 IntMatrix2::as_real() const {
  Mat2 m;
  m << double(a_), double(b_), double(c_), double(d_);
  return m;
}

IntMatrix2 operator*(const IntMatrix2& l, const IntMatrix2& r) {
  return {l.a_ * r.a_ + l.b_ * r.c_, l.a_ * r.b_ + l.b_ * r.d_,
          l.c_ * r.a_ + l.d_ * r.c_, l.c_ * r.b_ + l.d_ * r.d_};
}

double reduce_angle(double a) noexcept {
  constexpr double pi = std::numbers::pi;
  double r = a - pi * std::floor(a / pi);
  if (r >= pi || r < 0.0) r = 0.0;
  return r;
}

Direction::Direction(double angle) {
  if (!std::isfinite(angle)) throw InvalidArgument("direction angle must be finite");
  angle_ = reduce_angle(angle);
}

Direction Direction::from_vector(const Vec2& v) {
  if (!(v.squaredNorm() > 0.0)) throw InvalidArgument("zero vector has no direction");
  return Direction(std::atan2(v.y(), v.x()));
}

double Direction::distance(const Direction& other) const noexcept {
  const double d = std::abs(angle_ - other.angle_);
  return std::min(d, std::numbers::pi - d);
}

double Direction::signed_offset(const Direction& other) const noexcept {
  constexpr double pi = std::numbers::pi;
  double d = other.angle_ - angle_;
  if (d > pi / 2) d -= pi;
  if (d <= -pi / 2) d += pi;
  return d;
}

EigenSplit hyperbolic_eigensplit(const IntMatrix2& m) {
  const double tr = double(m.trace());
  const double det = double(m.det());
  const double disc = tr * tr - 4.0 * det;
  // det = 1: hyperbolic iff |tr| > 2; det = -1: iff tr != 0
  if (!(disc > 0.0) || (det > 0 && std::abs(tr) <= 2.0) || (det < 0 && tr == 0.0)) {
    throw NotHyperbolic("matrix has an eigenvalue of modulus one");
  }
  const double root = std::sqrt(disc);
  // larger-modulus root without cancellation, then Vieta for the other
  const double mu_u = tr >= 0 ? (tr + root) / 2.0 : (tr - root) / 2.0;
  const double mu_s = det / mu_u;

  auto eigvec = [&](double mu) {
    const Vec2 v1(double(m.b()), mu - double(m.a()));
    const Vec2 v2(mu - double(m.d()), double(m.c()));
    Vec2 v = v1.squaredNorm() >= v2.squaredNorm() ? v1 : v2;
    return Vec2(v / v.norm());
  };

  EigenSplit s;
  s.lambda_u = std::abs(mu_u);
  s.lambda_s = std::abs(mu_s);
  s.sign_u = mu_u > 0 ? 1.0 : -1.0;
  s.sign_s = mu_s > 0 ? 1.0 : -1.0;
  s.vec_u = eigvec(mu_u);
  s.vec_s = eigvec(mu_s);
  s.dir_u = Direction::from_vector(s.vec_u);
  s.dir_s = Direction::from_vector(s.vec_s);
  return s;
}

Direction push_direction(const Mat2& jac, const Direction& v) {
  const double scale = std::max(1.0, jac.cwiseAbs().maxCoeff());
  if (std::abs(jac.determinant()) <= 1e-14 * scale * scale) {
    throw SingularMatrix("push_direction: singular Jacobian");
  }
  return Direction::from_vector(jac * v.unit());
}

}  // namespace skewlab
