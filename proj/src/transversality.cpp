#include "skewlab/transversality.hpp"

#include "skewlab/errors.hpp"
#include "skewlab/parallel.hpp"
#include "skewlab/rng.hpp"

#include <cmath>
#include <limits>

namespace skewlab {

std::vector<TorusPoint2> covering_centers(int grid) {
  std::vector<TorusPoint2> c;
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b)
      c.push_back(TorusPoint2::reduced((a + 0.5) / grid, (b + 0.5) / grid));
  return c;
}

namespace {
double angle_bound(const SearchOptions& opt) {
  return std::min(opt.theta_max, 0.999 * max_safe_angle());
}

void check_search_options(const SearchOptions& opt) {
  if (!(opt.theta_max > 0.0 && opt.theta_max < std::numbers::pi / 2))
    throw InvalidArgument("theta_max must lie in (0, pi/2)");
  if (opt.grid < 1) throw InvalidArgument("search grid must be positive");
  if (!(std::sqrt(2.0) / (2.0 * opt.grid) < opt.rho))
    throw InvalidArgument("rotation inner radius does not cover the torus for this grid");
  if (!(2.0 * opt.rho < 0.5)) throw InvalidArgument("rotation radius must satisfy 2*rho < 1/2");
  if (opt.budget == 0) throw InvalidArgument("search budget must be positive");
}
}  // namespace

std::array<RotationChain, 3> trial_chains(const SearchOptions& opt, std::size_t trial) {
  const auto centers = covering_centers(opt.grid);
  const double b = angle_bound(opt);
  const CounterRng rng(opt.seed, trial);
  std::array<RotationChain, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<LocalizedRotation> rs;
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const double theta = trial == 0 ? 0.0 : rng.uniform(-b, b, i * centers.size() + j);
      rs.emplace_back(centers[j], opt.rho, theta);
    }
    out[i] = RotationChain(std::move(rs));
  }
  return out;
}

SearchResult search_perturbation(const LineField& w, const LineField& v1, const LineField& v2,
                                 const LineField& v3, const SearchOptions& opt) {
  check_search_options(opt);
  const LineField* vs[3] = {&v1, &v2, &v3};
  auto evaluate = [&](std::size_t trial) {
    SearchResult r;
    r.h = trial_chains(opt, trial);
    r.trial = trial;
    const LineField p1 = pushforward_linefield(FiberDiffeo::from_chain(r.h[0]), *vs[0]);
    const LineField p2 = pushforward_linefield(FiberDiffeo::from_chain(r.h[1]), *vs[1]);
    const LineField p3 = pushforward_linefield(FiberDiffeo::from_chain(r.h[2]), *vs[2]);
    r.report = check_empty_intersection(w, p1, p2, p3, opt.check);
    r.success = r.report.empty;
    return r;
  };

  SearchResult best;
  best.report.min_separation = -1.0;
  const std::size_t batch = std::max<std::size_t>(1, opt.batch);
  for (std::size_t start = 0; start < opt.budget; start += batch) {
    const std::size_t count = std::min(batch, opt.budget - start);
    std::vector<SearchResult> round(count);
    parallel_chunks(count, 1, opt.workers, [&](std::size_t lo, std::size_t, std::size_t) {
      round[lo] = evaluate(start + lo);
    });
    for (auto& r : round) {
      if (r.success) {
        r.trials_run = r.trial + 1;
        r.angle_bound = angle_bound(opt);
        return r;
      }
      if (r.report.min_separation > best.report.min_separation) best = std::move(r);
    }
  }
  best.trials_run = opt.budget;
  best.success = false;
  best.angle_bound = angle_bound(opt);
  return best;
}

Direction ws_direction(const SkewProductSystem& f, const TorusPoint2& base, const TorusPoint2& x,
                       const SplittingOptions& opt) {
  return estimate_direction(f, TorusPoint4{base, x}, Bundle::ws, opt).fiber_dir;
}

namespace {
void require(const HolonomyResult& r) {
  if (!r.converged)
    throw NonConvergence("holonomy did not reach tolerance by depth " + std::to_string(r.depth),
                         r.increments.empty() ? 0.0 : r.increments.back());
}
}  // namespace

Direction transported_ws(const SkewProductSystem& f, const TorusPoint2& p_u, const TorusPoint2& q,
                         const TorusPoint2& x, const AlphaOptions& opt) {
  if (q == p_u) return ws_direction(f, p_u, x, opt.splitting);
  const HolonomyResult y = u_holonomy(f, p_u, q, x, opt.holonomy);
  require(y);
  const HolonomyJacobian dh = u_holonomy_jacobian(f, q, p_u, y.point, opt.holonomy);
  require(dh.value);
  return push_direction(dh.jac, ws_direction(f, q, y.point, opt.splitting));
}

double alpha_angle(const SkewProductSystem& f, const TorusPoint2& p_u, const TorusPoint2& q,
                   const TorusPoint2& x, const AlphaOptions& opt) {
  if (q == p_u) return 0.0;
  return ws_direction(f, p_u, x, opt.splitting).distance(transported_ws(f, p_u, q, x, opt));
}

AlphaMinResult alpha_min(const SkewProductSystem& f, const TorusPoint2& p_u,
                         const std::array<TorusPoint2, 3>& q, int n, const AlphaOptions& opt,
                         unsigned workers) {
  if (n < 1) throw InvalidArgument("alpha grid must be positive");
  const std::size_t total = std::size_t(n) * std::size_t(n);
  std::vector<std::array<double, 3>> vals(total);
  parallel_chunks(total, 16, workers, [&](std::size_t lo, std::size_t hi, std::size_t) {
    for (std::size_t k = lo; k < hi; ++k) {
      const TorusPoint2 x = TorusPoint2::reduced(double(k / n) / n, double(k % n) / n);
      for (int i = 0; i < 3; ++i) vals[k][i] = alpha_angle(f, p_u, q[i], x, opt);
    }
  });
  AlphaMinResult r;
  r.n = n;
  r.alpha_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < total; ++k) {
    const double a = std::max({vals[k][0], vals[k][1], vals[k][2]});
    for (int i = 0; i < 3; ++i) r.per_q_max[i] = std::max(r.per_q_max[i], vals[k][i]);
    r.alpha_max = std::max(r.alpha_max, a);
    if (a < r.alpha_min) {
      r.alpha_min = a;
      r.argmin = TorusPoint2::reduced(double(k / n) / n, double(k % n) / n);
    }
  }
  return r;
}

AlphaProfile alpha_leaf_profile(const SkewProductSystem& f, const TorusPoint2& p_u,
                                double t_center, const TorusPoint2& x, double half_width,
                                int steps, const AlphaOptions& opt) {
  if (steps < 1) throw InvalidArgument("profile needs at least one step per side");
  AlphaProfile p;
  for (int k = -steps; k <= steps; ++k) {
    const double t = t_center + half_width * k / steps;
    const TorusPoint2 q = leaf_point(f, Leaf::unstable, p_u, t);
    p.t.push_back(t);
    p.alpha.push_back(t == 0.0 ? 0.0 : alpha_angle(f, p_u, q, x, opt));
  }
  const std::size_t mid = std::size_t(steps);
  p.center_value = p.alpha[mid];
  const double half = 0.5 * p.center_value;
  std::size_t lo = mid, hi = mid;
  while (lo > 0 && p.alpha[lo - 1] >= half) --lo;
  while (hi + 1 < p.alpha.size() && p.alpha[hi + 1] >= half) ++hi;
  p.lo = p.t[lo];
  p.hi = p.t[hi];
  return p;
}

AngleFields angle_fields(std::shared_ptr<const SkewProductSystem> f, const TorusPoint2& p_u,
                         const std::array<TorusPoint2, 3>& q, int n, const AlphaOptions& opt) {
  auto w = [f, p_u, opt](const TorusPoint2& x) { return ws_direction(*f, p_u, x, opt.splitting); };
  AngleFields out{LineField::sample(n, w, true),
                  {LineField::constant(1, 0), LineField::constant(1, 0), LineField::constant(1, 0)}};
  for (int i = 0; i < 3; ++i) {
    const TorusPoint2 qi = q[i];
    auto v = [f, p_u, qi, opt](const TorusPoint2& x) { return transported_ws(*f, p_u, qi, x, opt); };
    out.v[i] = LineField::sample(n, v, true);
  }
  return out;
}

}  // namespace skewlab
