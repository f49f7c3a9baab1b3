#include "skewlab/system.hpp"

#include "skewlab/errors.hpp"
#include "skewlab/holonomy.hpp"

#include <cstdio>
#include <sstream>

namespace skewlab {

double BaseGate::weight(const TorusPoint2& p) const noexcept {
  const double r = displacement(center, p).norm();
  if (r >= support()) return 0.0;
  return RadialBump{radius}.value(r);
}

Vec2 BaseGate::grad(const TorusPoint2& p) const noexcept {
  const Vec2 d = displacement(center, p);
  const double r = d.norm();
  if (r >= support() || r <= radius) return Vec2::Zero();
  return RadialBump{radius}.deriv(r) / r * d;
}

bool BaseGate::outside(const TorusPoint2& p) const noexcept {
  return displacement(center, p).norm() >= support();
}

namespace {

struct Partial {
  TorusPoint2 point;
  Mat2 dy;
  Mat2 dp;
};

Partial identity_partial(const TorusPoint2& y) { return {y, Mat2::Identity(), Mat2::Zero()}; }

bool perturbation_is_identity(const Perturbation& p) {
  return std::visit([](const auto& q) {
    using T = std::decay_t<decltype(q)>;
    if constexpr (std::is_same_v<T, FiberPerturbation>) return q.rotations.is_identity();
    else return q.h.is_identity();
  }, p);
}

bool trivial_reference(const HolonomyConjugation& c) {
  return !c.reference || c.reference->is_product() || c.t == 0.0;
}

Transport conj_transport(const HolonomyConjugation& c, double from, double to,
                         const TorusPoint2& y, bool jac) {
  return transport(*c.reference, Leaf::unstable, c.anchor, from, to, y, c.depth, jac);
}

TorusPoint2 eval_point(const Perturbation& pert, const TorusPoint2& p1, const TorusPoint2& y,
                       bool inverse) {
  if (const auto* fp = std::get_if<FiberPerturbation>(&pert)) {
    const double beta = fp->gate.weight(p1);
    if (beta == 0.0) return y;
    return inverse ? fp->rotations.inverse(y, beta) : fp->rotations.apply(y, beta);
  }
  const auto& c = std::get<HolonomyConjugation>(pert);
  const double beta = c.gate.weight(p1);
  if (beta == 0.0) return y;
  // forward uses h^{-1} in the middle, inverse uses h
  if (trivial_reference(c)) return inverse ? c.h.apply(y, beta) : c.h.inverse(y, beta);
  const TorusPoint2 a = conj_transport(c, c.t, 0.0, y, false).point;
  const TorusPoint2 b = inverse ? c.h.apply(a, beta) : c.h.inverse(a, beta);
  return conj_transport(c, 0.0, c.t, b, false).point;
}

Partial eval_partial(const Perturbation& pert, const TorusPoint2& p1, const TorusPoint2& y) {
  if (const auto* fp = std::get_if<FiberPerturbation>(&pert)) {
    const double beta = fp->gate.weight(p1);
    if (beta == 0.0) return identity_partial(y);
    const auto e = fp->rotations.evaluate(y, beta, false);
    return {e.point, e.jac, e.d_scale * fp->gate.grad(p1).transpose()};
  }
  const auto& c = std::get<HolonomyConjugation>(pert);
  const double beta = c.gate.weight(p1);
  if (beta == 0.0) return identity_partial(y);
  if (trivial_reference(c)) {
    const auto e = c.h.evaluate(y, beta, true);
    return {e.point, e.jac, e.d_scale * c.gate.grad(p1).transpose()};
  }
  const Transport in = conj_transport(c, c.t, 0.0, y, true);
  const auto e = c.h.evaluate(in.point, beta, true);
  const Transport out = conj_transport(c, 0.0, c.t, e.point, true);
  return {out.point, out.jac * e.jac * in.jac,
          out.jac * e.d_scale * c.gate.grad(p1).transpose()};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void describe_chain(std::ostringstream& os, const RotationChain& ch) {
  os << '[';
  for (const auto& r : ch.rotations())
    os << '(' << fmt(r.center().x()) << ',' << fmt(r.center().y()) << ',' << fmt(r.rho()) << ','
       << fmt(r.theta()) << ')';
  os << ']';
}

}  // namespace

SkewProductSystem::SkewProductSystem(IntMatrix2 base, IntMatrix2 fiber,
                                     std::vector<Perturbation> perturbations,
                                     bool check_domination)
    : base_(base),
      fiber_(fiber),
      base_inv_(base.inverse()),
      fiber_inv_(fiber.inverse()),
      perturbations_(std::move(perturbations)),
      base_split_(hyperbolic_eigensplit(base)),
      fiber_split_(hyperbolic_eigensplit(fiber)),
      check_domination_(check_domination) {
  if (check_domination && !(fiber_split_.lambda_u < base_split_.lambda_u))
    throw DominationViolated("fiber expansion " + fmt(fiber_split_.lambda_u) +
                             " is not dominated by base expansion " + fmt(base_split_.lambda_u));
  product_ = true;
  for (const auto& p : perturbations_)
    if (!perturbation_is_identity(p)) product_ = false;
  step_ = {{double(base.a()), double(base.b()), double(base.c()), double(base.d())},
           {double(fiber.a()), double(fiber.b()), double(fiber.c()), double(fiber.d())}};
}

SkewProductSystem SkewProductSystem::with_perturbation(Perturbation p) const {
  auto list = perturbations_;
  list.push_back(std::move(p));
  return SkewProductSystem(base_, fiber_, std::move(list), check_domination_);
}

TorusPoint2 SkewProductSystem::perturbation_map(const TorusPoint2& p1,
                                                const TorusPoint2& y) const {
  TorusPoint2 z = y;
  for (auto it = perturbations_.rbegin(); it != perturbations_.rend(); ++it)
    z = eval_point(*it, p1, z, false);
  return z;
}

TorusPoint2 SkewProductSystem::fiber_map(const TorusPoint2& p1, const TorusPoint2& y) const {
  return fiber_.act(perturbation_map(p1, y));
}

TorusPoint2 SkewProductSystem::fiber_inverse(const TorusPoint2& p1, const TorusPoint2& z) const {
  TorusPoint2 y = fiber_inv_.act(z);
  for (const auto& p : perturbations_) y = eval_point(p, p1, y, true);
  return y;
}

FiberEval SkewProductSystem::fiber_eval(const TorusPoint2& p1, const TorusPoint2& y) const {
  Partial acc = identity_partial(y);
  for (auto it = perturbations_.rbegin(); it != perturbations_.rend(); ++it) {
    const Partial step = eval_partial(*it, p1, acc.point);
    acc.dp = step.dy * acc.dp + step.dp;
    acc.dy = step.dy * acc.dy;
    acc.point = step.point;
  }
  const Mat2 a = fiber_.as_real();
  return {fiber_.act(acc.point), a * acc.dy, a * acc.dp};
}

TorusPoint4 SkewProductSystem::apply(const TorusPoint4& p) const {
  return {base_.act(p.base), fiber_map(p.base, p.fiber)};
}

TorusPoint4 SkewProductSystem::apply_inverse(const TorusPoint4& p) const {
  const TorusPoint2 b = base_inv_.act(p.base);
  return {b, fiber_inverse(b, p.fiber)};
}

Mat4 SkewProductSystem::jacobian(const TorusPoint4& p) const {
  const FiberEval e = fiber_eval(p.base, p.fiber);
  Mat4 j = Mat4::Zero();
  j.topLeftCorner<2, 2>() = base_.as_real();
  j.bottomLeftCorner<2, 2>() = e.d_base;
  j.bottomRightCorner<2, 2>() = e.d_fiber;
  return j;
}

void SkewProductSystem::apply_batch(kernels::PointBatch& batch, std::size_t begin,
                                    std::size_t end, const kernels::KernelTable& table) const {
  if (end <= begin) return;
  const std::size_t n = end - begin;
  double* bx = batch.bx.data() + begin;
  double* by = batch.by.data() + begin;
  double* fx = batch.fx.data() + begin;
  double* fy = batch.fy.data() + begin;
  if (!product_) {
    std::vector<std::uint8_t> any(n, 0), mask(n);
    for (const auto& p : perturbations_) {
      const BaseGate& g = std::visit([](const auto& q) -> const BaseGate& { return q.gate; }, p);
      // slightly enlarged radius: exact weights are recomputed below
      const double r = g.support();
      table.gate_mask(g.center.x(), g.center.y(), r * r * (1.0 + 1e-9), bx, by, mask.data(), n);
      for (std::size_t i = 0; i < n; ++i) any[i] |= mask[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!any[i]) continue;
      const TorusPoint2 z = perturbation_map(TorusPoint2::reduced(bx[i], by[i]),
                                             TorusPoint2::reduced(fx[i], fy[i]));
      fx[i] = z.x();
      fy[i] = z.y();
    }
  }
  table.step_linear(step_, bx, by, fx, fy, n);
}

std::string SkewProductSystem::describe() const {
  std::ostringstream os;
  auto mat = [&](const IntMatrix2& m) {
    os << '[' << m.a() << ',' << m.b() << ',' << m.c() << ',' << m.d() << ']';
  };
  os << "base=";
  mat(base_);
  os << ";fiber=";
  mat(fiber_);
  for (const auto& p : perturbations_) {
    std::visit([&](const auto& q) {
      using T = std::decay_t<decltype(q)>;
      os << (std::is_same_v<T, FiberPerturbation> ? ";gate(" : ";conj(") << fmt(q.gate.center.x())
         << ',' << fmt(q.gate.center.y()) << ',' << fmt(q.gate.radius) << ')';
      if constexpr (std::is_same_v<T, FiberPerturbation>) {
        describe_chain(os, q.rotations);
      } else {
        describe_chain(os, q.h);
        os << "{ref=" << (q.reference ? q.reference->describe() : "") << ";anchor="
           << fmt(q.anchor.x()) << ',' << fmt(q.anchor.y()) << ";t=" << fmt(q.t)
           << ";depth=" << q.depth << '}';
      }
    }, p);
  }
  return os.str();
}

std::uint64_t SkewProductSystem::hash() const { return fnv1a64(describe()); }

std::uint64_t fnv1a64(std::string_view data) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SkewProductSystem make_product(const IntMatrix2& base, const IntMatrix2& fiber) {
  return SkewProductSystem(base, fiber, {}, true);
}

SkewProductSystem make_product_unchecked(const IntMatrix2& base, const IntMatrix2& fiber) {
  return SkewProductSystem(base, fiber, {}, false);
}

IntMatrix2 cat_matrix() { return IntMatrix2(2, 1, 1, 1); }

SkewProductSystem example_system() {
  return make_product(IntMatrix2(89, 55, 55, 34), cat_matrix());
}

}  // namespace skewlab
