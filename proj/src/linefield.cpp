#include "skewlab/linefield.hpp"

#include "skewlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace skewlab {

FiberDiffeo FiberDiffeo::identity() {
  return {[](const TorusPoint2& x) { return x; }, [](const TorusPoint2& x) { return x; },
          [](const TorusPoint2&) { return Mat2(Mat2::Identity()); }};
}

FiberDiffeo FiberDiffeo::from_chain(RotationChain chain) {
  auto c = std::make_shared<const RotationChain>(std::move(chain));
  return {[c](const TorusPoint2& x) { return c->apply(x); },
          [c](const TorusPoint2& x) { return c->inverse(x); },
          [c](const TorusPoint2& x) { return c->evaluate(x, 1.0).jac; }};
}

FiberDiffeo FiberDiffeo::from_matrix(const IntMatrix2& m) {
  const IntMatrix2 inv = m.inverse();
  const Mat2 j = m.as_real();
  return {[m](const TorusPoint2& x) { return m.act(x); },
          [inv](const TorusPoint2& x) { return inv.act(x); },
          [j](const TorusPoint2&) { return j; }};
}

FiberDiffeo FiberDiffeo::direction_rotation(double angle) {
  Mat2 r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return {[](const TorusPoint2& x) { return x; }, [](const TorusPoint2& x) { return x; },
          [r](const TorusPoint2&) { return r; }};
}

FiberDiffeo compose(const FiberDiffeo& first, const FiberDiffeo& second) {
  return {[=](const TorusPoint2& x) { return first.forward(second.forward(x)); },
          [=](const TorusPoint2& x) { return second.inverse(first.inverse(x)); },
          [=](const TorusPoint2& x) {
            return Mat2(first.jacobian(second.forward(x)) * second.jacobian(x));
          }};
}

LineField::LineField(int n, std::vector<Direction> values, Evaluator exact)
    : n_(n), values_(std::move(values)), exact_(std::move(exact)) {
  if (n < 1 || values_.size() != std::size_t(n) * std::size_t(n))
    throw InvalidArgument("line field needs n*n values for n >= 1");
}

LineField LineField::constant(int n, double angle) {
  const Direction d(angle);
  return LineField(n, std::vector<Direction>(std::size_t(n) * std::size_t(n), d),
                   [d](const TorusPoint2&) { return d; });
}

LineField LineField::sample(int n, Evaluator fn, bool keep_exact) {
  if (n < 1) throw InvalidArgument("line field resolution must be positive");
  std::vector<Direction> v(std::size_t(n) * std::size_t(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      v[std::size_t(i) * std::size_t(n) + std::size_t(j)] =
          fn(TorusPoint2::reduced(double(i) / n, double(j) / n));
  return LineField(n, std::move(v), keep_exact ? std::move(fn) : Evaluator());
}

Direction LineField::at(const TorusPoint2& x) const {
  return exact_ ? exact_(x) : interpolate(x);
}

Direction LineField::interpolate(const TorusPoint2& x) const {
  const double u = x.x() * n_, v = x.y() * n_;
  const double fu = std::floor(u), fv = std::floor(v);
  const int i = int(fu), j = int(fv);
  const double s = u - fu, t = v - fv;
  const Direction& d00 = grid(i, j);
  // lift the other corners next to d00 so the mod-pi seam does not matter
  const double a00 = d00.angle();
  const double a10 = a00 + d00.signed_offset(grid(i + 1, j));
  const double a01 = a00 + d00.signed_offset(grid(i, j + 1));
  const double a11 = a00 + d00.signed_offset(grid(i + 1, j + 1));
  const double a = (1 - s) * (1 - t) * a00 + s * (1 - t) * a10 + (1 - s) * t * a01 + s * t * a11;
  return Direction(reduce_angle(a));
}

LineField pushforward_linefield(const FiberDiffeo& h, const LineField& v) {
  auto eval = [h, v](const TorusPoint2& x) {
    const TorusPoint2 y = h.inverse(x);
    return push_direction(h.jacobian(y), v.at(y));
  };
  return LineField::sample(v.resolution(), eval, true);
}

namespace {

struct Quad {
  Direction d[4];  // W, V1, V2, V3
};

double max_separation(const Quad& q) {
  double m = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) m = std::max(m, q.d[a].distance(q.d[b]));
  return m;
}

// A cell may hide a common point when every V_i either crosses W inside it
// or comes within 3 tol of W at a corner.
bool candidate(const Quad* corners, double tol) {
  for (int k = 1; k <= 3; ++k) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, small = lo;
    for (int c = 0; c < 4; ++c) {
      const double d = corners[c].d[0].signed_offset(corners[c].d[k]);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      small = std::min(small, std::abs(d));
    }
    const bool crosses = lo <= 0.0 && hi >= 0.0 && std::max(-lo, hi) < std::numbers::pi / 4;
    if (!crosses && !(small < 3.0 * tol)) return false;
  }
  return true;
}

}  // namespace

IntersectionReport check_empty_intersection(const LineField& w, const LineField& v1,
                                            const LineField& v2, const LineField& v3,
                                            const IntersectionOptions& opt) {
  const int n = w.resolution();
  if (v1.resolution() != n || v2.resolution() != n || v3.resolution() != n)
    throw ResolutionMismatch("line fields must share the grid resolution");
  IntersectionReport rep;
  rep.angle_tol = opt.angle_tol;
  rep.min_separation = std::numeric_limits<double>::infinity();

  auto record = [&](const TorusPoint2& x, const Quad& q) {
    const double sep = max_separation(q);
    ++rep.evaluated_points;
    if (sep < rep.min_separation) {
      rep.min_separation = sep;
      rep.argmin = x;
    }
    if (sep <= opt.angle_tol) {
      rep.empty = false;
      if (rep.witnesses.size() < opt.max_witnesses)
        rep.witnesses.push_back({x, q.d[0], {q.d[1], q.d[2], q.d[3]}, sep});
      return true;
    }
    return false;
  };
  auto eval = [&](const TorusPoint2& x) { return Quad{{w.at(x), v1.at(x), v2.at(x), v3.at(x)}}; };

  std::vector<Quad> g(std::size_t(n) * std::size_t(n));
  std::vector<char> hit(g.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t k = std::size_t(i) * std::size_t(n) + std::size_t(j);
      g[k] = Quad{{w.grid(i, j), v1.grid(i, j), v2.grid(i, j), v3.grid(i, j)}};
      hit[k] = record(TorusPoint2::reduced(double(i) / n, double(j) / n), g[k]);
    }

  struct Cell {
    double x0, y0, h;
    Quad c[4];  // corners (0,0), (1,0), (0,1), (1,1)
    int level;
  };
  std::vector<Cell> stack;
  auto at_grid = [&](int i, int j) -> std::size_t {
    return std::size_t((i + n) % n) * std::size_t(n) + std::size_t((j + n) % n);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t ks[4] = {at_grid(i, j), at_grid(i + 1, j), at_grid(i, j + 1),
                                 at_grid(i + 1, j + 1)};
      if (hit[ks[0]] || hit[ks[1]] || hit[ks[2]] || hit[ks[3]]) continue;
      Cell c{double(i) / n, double(j) / n, 1.0 / n, {g[ks[0]], g[ks[1]], g[ks[2]], g[ks[3]]}, 0};
      if (candidate(c.c, opt.angle_tol)) stack.push_back(c);
    }

  const int f = std::max(2, opt.refine_factor);
  std::vector<Quad> sub(std::size_t(f + 1) * std::size_t(f + 1));
  std::vector<char> subhit(sub.size());
  while (!stack.empty() && rep.refined_cells < opt.max_refined_cells) {
    const Cell cell = stack.back();
    stack.pop_back();
    ++rep.refined_cells;
    const double h = cell.h / f;
    for (int a = 0; a <= f; ++a)
      for (int b = 0; b <= f; ++b) {
        const std::size_t k = std::size_t(a) * std::size_t(f + 1) + std::size_t(b);
        const bool corner = (a == 0 || a == f) && (b == 0 || b == f);
        if (corner) {
          sub[k] = cell.c[(a == f ? 1 : 0) + (b == f ? 2 : 0)];
          subhit[k] = 0;
          continue;
        }
        const TorusPoint2 x(cell.x0 + a * h, cell.y0 + b * h);
        sub[k] = eval(x);
        subhit[k] = record(x, sub[k]);
      }
    if (cell.level + 1 >= opt.refine_levels) continue;
    for (int a = 0; a < f; ++a)
      for (int b = 0; b < f; ++b) {
        const std::size_t ks[4] = {std::size_t(a) * (f + 1) + b, std::size_t(a + 1) * (f + 1) + b,
                                   std::size_t(a) * (f + 1) + b + 1,
                                   std::size_t(a + 1) * (f + 1) + b + 1};
        if (subhit[ks[0]] || subhit[ks[1]] || subhit[ks[2]] || subhit[ks[3]]) continue;
        Cell c{cell.x0 + a * h, cell.y0 + b * h, h, {sub[ks[0]], sub[ks[1]], sub[ks[2]], sub[ks[3]]},
               cell.level + 1};
        if (candidate(c.c, opt.angle_tol)) stack.push_back(c);
      }
  }
  return rep;
}

}  // namespace skewlab
