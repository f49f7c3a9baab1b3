#include "skewlab/rigidity.hpp"

#include "skewlab/errors.hpp"
#include "skewlab/holonomy.hpp"

#include <cstdio>

namespace skewlab {
namespace {

std::string pt(const TorusPoint2& p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.6g, %.6g)", p.x(), p.y());
  return buf;
}

// Orbit points M^n p for 1 <= |n| <= depth.
std::vector<TorusPoint2> short_orbit(const IntMatrix2& m, const TorusPoint2& p, int depth) {
  std::vector<TorusPoint2> out;
  const IntMatrix2 inv = m.inverse();
  TorusPoint2 a = p, b = p;
  for (int n = 1; n <= depth; ++n) {
    a = m.act(a);
    b = inv.act(b);
    out.push_back(a);
    out.push_back(b);
  }
  return out;
}

std::string violation(const SkewProductSystem& f, const TorusPoint2& p_u,
                      const std::vector<TorusPoint2>& q, const RigidityOptions& opt) {
  const double reach = 2.0 * opt.gate_radius;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(torus_dist(p_u, q[i]) > reach)) return "gate " + std::to_string(i) + " contains p_u";
    for (std::size_t j = i + 1; j < q.size(); ++j)
      if (!(torus_dist(q[i], q[j]) > 2.0 * reach))
        return "gates " + std::to_string(i) + " and " + std::to_string(j) + " overlap";
  }
  auto check_orbit = [&](const TorusPoint2& start, const std::string& who) -> std::string {
    for (const auto& o : short_orbit(f.base(), start, opt.orbit_depth))
      for (std::size_t j = 0; j < q.size(); ++j)
        if (!(torus_dist(o, q[j]) > reach))
          return "orbit of " + who + " meets gate " + std::to_string(j) + " at " + pt(o);
    return {};
  };
  if (auto s = check_orbit(p_u, "p_u"); !s.empty()) return s;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (auto s = check_orbit(q[i], "q_" + std::to_string(i)); !s.empty()) return s;
  return {};
}

// Smallest depth d >= 3 for which transports at d and d + 1 agree within
// tol on a 3x3 set of fiber points, in both directions.
int transport_depth(const SkewProductSystem& ref, const TorusPoint2& anchor, double t, double tol,
                    int max_depth) {
  double worst = 0.0;
  for (int d = 3; d < max_depth; ++d) {
    worst = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const TorusPoint2 x = TorusPoint2::reduced((a + 0.25) / 3.0, (b + 0.6) / 3.0);
        for (auto [from, to] : {std::pair{t, 0.0}, std::pair{0.0, t}}) {
          const TorusPoint2 u = transport(ref, Leaf::unstable, anchor, from, to, x, d).point;
          const TorusPoint2 v = transport(ref, Leaf::unstable, anchor, from, to, x, d + 1).point;
          worst = std::max(worst, torus_dist(u, v));
        }
      }
    if (worst < tol) return d + 1;
  }
  throw NonConvergence("holonomy transport for the conjugation did not converge", worst);
}

}  // namespace

std::string gate_violation(const SkewProductSystem& f, const TorusPoint2& p_u,
                           const std::array<TorusPoint2, 3>& q, const RigidityOptions& opt) {
  return violation(f, p_u, {q.begin(), q.end()}, opt);
}

RigidityBreaking build_rigidity_breaking(const SkewProductSystem& f, const TorusPoint2& p_u,
                                         const std::array<TorusPoint2, 3>& q,
                                         const std::array<RotationChain, 3>& h,
                                         double holonomy_tol, const RigidityOptions& opt) {
  if (!(opt.gate_radius > 0.0)) throw InvalidArgument("gate radius must be positive");
  if (!(holonomy_tol > 0.0)) throw InvalidArgument("holonomy tolerance must be positive");
  std::array<double, 3> t{};
  for (int i = 0; i < 3; ++i) t[i] = leaf_parameter(f, Leaf::unstable, p_u, q[i]);
  if (auto why = gate_violation(f, p_u, q, opt); !why.empty())
    throw InvalidArgument("inadmissible rigidity-breaking gates: " + why);

  auto ref = std::make_shared<const SkewProductSystem>(f);
  RigidityBreaking out{f, ref, p_u, q, t, {0, 0, 0}};
  SkewProductSystem g = f;
  for (int i = 0; i < 3; ++i) {
    const int depth = ref->is_product()
                          ? 0
                          : transport_depth(*ref, p_u, t[i], holonomy_tol / 10.0,
                                            opt.max_transport_depth);
    out.transport_depth[i] = depth;
    g = g.with_perturbation(
        HolonomyConjugation{BaseGate{q[i], opt.gate_radius}, h[i], ref, p_u, t[i], depth});
  }
  out.system = std::move(g);
  return out;
}

std::array<double, 3> find_leaf_parameters(const SkewProductSystem& f, const TorusPoint2& p_u,
                                           const RigidityOptions& opt, double t_min, double t_max,
                                           int steps) {
  std::vector<TorusPoint2> chosen;
  std::array<double, 3> t{};
  for (int k = 0; k <= steps && chosen.size() < 3; ++k) {
    const double cand = t_min + (t_max - t_min) * k / steps;
    auto trial = chosen;
    trial.push_back(leaf_point(f, Leaf::unstable, p_u, cand));
    if (violation(f, p_u, trial, opt).empty()) {
      t[chosen.size()] = cand;
      chosen = std::move(trial);
    }
  }
  if (chosen.size() < 3)
    throw InvalidArgument("no admissible leaf parameters found in [" + std::to_string(t_min) +
                          ", " + std::to_string(t_max) + "]");
  return t;
}

}  // namespace skewlab
