#include "skewlab/splitting.hpp"

#include "skewlab/errors.hpp"
#include "skewlab/parallel.hpp"
#include "skewlab/rng.hpp"

#include <cmath>
#include <limits>

namespace skewlab {

std::string_view bundle_name(Bundle b) noexcept {
  switch (b) {
    case Bundle::ss: return "ss";
    case Bundle::ws: return "ws";
    case Bundle::wu: return "wu";
    case Bundle::uu: return "uu";
  }
  return "?";
}

namespace {

// Generic start vectors, far from every eigenline of the systems in use.
const Vec2 kStart2 = Vec2(0.8191520442889918, 0.5735764363510461);
const Vec4 kStart4 = Vec4(0.5956893, 0.4496355, 0.5394799, 0.3873175).normalized();

bool backward(Bundle b) { return b == Bundle::wu || b == Bundle::uu; }
bool central(Bundle b) { return b == Bundle::wu || b == Bundle::ws; }

template <class M, class V>
DirectionEstimate iterate(const SkewProductSystem& f, const TorusPoint4& p, Bundle bundle,
                          const SplittingOptions& opt, const V& start) {
  M prod = M::Identity();
  TorusPoint4 q = p;
  V prev = start;
  double change = std::numeric_limits<double>::infinity();
  auto factor = [&](const TorusPoint4& at) -> M {
    if constexpr (M::RowsAtCompileTime == 2) return f.fiber_jacobian(at.base, at.fiber);
    else return f.jacobian(at);
  };
  for (int n = 1; n <= opt.max_iter; ++n) {
    if (backward(bundle)) {
      q = f.apply_inverse(q);
      prod = prod * factor(q);
    } else {
      prod = prod * factor(q).inverse();
      q = f.apply(q);
    }
    prod /= prod.norm();
    V v = (prod * start).normalized();
    change = line_angle(v, prev);
    prev = v;
    if (n >= 2 && change < opt.tol) {
      DirectionEstimate e{bundle, Vec4::Zero(), Direction(), n, change};
      if constexpr (V::RowsAtCompileTime == 2) {
        e.vector.tail<2>() = v;
        e.fiber_dir = Direction::from_vector(v);
      } else {
        e.vector = v;
      }
      return e;
    }
  }
  throw MaxIterExceeded("splitting estimate for E^" + std::string(bundle_name(bundle)) +
                            " did not converge in " + std::to_string(opt.max_iter) +
                            " iterations",
                        change);
}

}  // namespace

DirectionEstimate estimate_direction(const SkewProductSystem& f, const TorusPoint4& p,
                                     Bundle bundle, const SplittingOptions& opt) {
  if (central(bundle)) return iterate<Mat2>(f, p, bundle, opt, kStart2);
  return iterate<Mat4>(f, p, bundle, opt, kStart4);
}

SplittingEstimate estimate_splitting(const SkewProductSystem& f, const TorusPoint4& p,
                                     const SplittingOptions& opt) {
  SplittingEstimate s{p, Vec4::Zero(), Vec4::Zero(), Direction(), Direction(), 0, 0.0};
  for (Bundle b : {Bundle::ss, Bundle::ws, Bundle::wu, Bundle::uu}) {
    const DirectionEstimate e = estimate_direction(f, p, b, opt);
    s.iterations = std::max(s.iterations, e.iterations);
    s.residual = std::max(s.residual, e.residual);
    switch (b) {
      case Bundle::ss: s.e_ss = e.vector; break;
      case Bundle::uu: s.e_uu = e.vector; break;
      case Bundle::ws: s.e_ws = e.fiber_dir; break;
      case Bundle::wu: s.e_wu = e.fiber_dir; break;
    }
  }
  return s;
}

double expansion(const SkewProductSystem& f, const TorusPoint4& p, const DirectionEstimate& e) {
  if (central(e.bundle)) return (f.fiber_jacobian(p.base, p.fiber) * e.fiber_dir.unit()).norm();
  return (f.jacobian(p) * e.vector.normalized()).norm();
}

ExpansionBounds expansion_rates(const SkewProductSystem& f, const GridOptions& opt) {
  if (opt.n < 1) throw InvalidArgument("grid size must be positive");
  const std::size_t n = std::size_t(opt.n);
  const std::size_t total = n * n * n * n;
  double off[4] = {0.5, 0.5, 0.5, 0.5};
  if (opt.random_offset) {
    const CounterRng rng(opt.seed, 0x5e11a7e5ULL);
    for (int k = 0; k < 4; ++k) off[k] = rng.uniform(std::uint64_t(k));
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t grain = 64;
  const std::size_t chunks = chunk_count(total, grain);
  std::vector<std::array<RateBounds, 4>> partial(chunks);
  parallel_chunks(total, grain, opt.workers, [&](std::size_t lo, std::size_t hi, std::size_t c) {
    std::array<RateBounds, 4> acc;
    acc.fill({inf, -inf});
    for (std::size_t idx = lo; idx < hi; ++idx) {
      std::size_t r = idx;
      double x[4];
      for (int k = 3; k >= 0; --k) {
        x[k] = (double(r % n) + off[k]) / double(n);
        r /= n;
      }
      const TorusPoint4 p{TorusPoint2(x[0], x[1]), TorusPoint2(x[2], x[3])};
      int k = 0;
      for (Bundle b : {Bundle::ss, Bundle::ws, Bundle::wu, Bundle::uu}) {
        const double rate = expansion(f, p, estimate_direction(f, p, b, opt.splitting));
        acc[k].lo = std::min(acc[k].lo, rate);
        acc[k].hi = std::max(acc[k].hi, rate);
        ++k;
      }
    }
    partial[c] = acc;
  });
  std::array<RateBounds, 4> all;
  all.fill({inf, -inf});
  for (const auto& acc : partial)
    for (int k = 0; k < 4; ++k) {
      all[k].lo = std::min(all[k].lo, acc[k].lo);
      all[k].hi = std::max(all[k].hi, acc[k].hi);
    }
  return {all[0], all[1], all[2], all[3], total, opt.n};
}

namespace {
Inequality make_ineq(std::string name, double lhs, double rhs, bool strict) {
  const bool holds = strict ? lhs < rhs : lhs <= rhs;
  return {std::move(name), lhs, rhs, strict, holds, rhs - lhs};
}
}  // namespace

ConditionReport verify_conditions(const ExpansionBounds& b) {
  for (const RateBounds* r : {&b.ss, &b.ws, &b.wu, &b.uu})
    if (!(r->lo > 0.0) || !(r->hi > 0.0)) throw InvalidArgument("expansion bounds must be positive");
  ConditionReport rep;
  rep.bounds = b;
  // Strict between bundles; within a bundle lo <= hi (equal for linear systems).
  rep.ordering = {
      make_ineq("ss- <= ss+", b.ss.lo, b.ss.hi, false),
      make_ineq("ss+ < ws-", b.ss.hi, b.ws.lo, true),
      make_ineq("ws- <= ws+", b.ws.lo, b.ws.hi, false),
      make_ineq("ws+ < 1", b.ws.hi, 1.0, true),
      make_ineq("1 < wu-", 1.0, b.wu.lo, true),
      make_ineq("wu- <= wu+", b.wu.lo, b.wu.hi, false),
      make_ineq("wu+ < uu-", b.wu.hi, b.uu.lo, true),
      make_ineq("uu- <= uu+", b.uu.lo, b.uu.hi, false),
  };
  const double q = b.ws.lo / b.wu.hi;
  rep.bunching = {
      make_ineq("ss+ < (ws-/wu+)^2", b.ss.hi, q * q, true),
      make_ineq("(wu+/ws-)^2 < uu-", 1.0 / (q * q), b.uu.lo, true),
  };
  rep.ratio = make_ineq("log ws- / log ss+ < (log uu- - log wu+) / (-log ss-)",
                        std::log(b.ws.lo) / std::log(b.ss.hi),
                        (std::log(b.uu.lo) - std::log(b.wu.hi)) / (-std::log(b.ss.lo)), true);
  rep.a = true;
  for (const auto& i : rep.ordering) rep.a = rep.a && i.holds;
  rep.b = rep.bunching[0].holds && rep.bunching[1].holds;
  rep.c = rep.ratio.holds;
  return rep;
}

}  // namespace skewlab
