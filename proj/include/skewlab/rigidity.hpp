#pragma once

// Fiber perturbation over three points of one base unstable leaf:
// g2(p1, .) = f2(p1, .) o T_{u->i} o h_i(beta_i(p1))^{-1} o T_{i->u} near q_i,
// g = f elsewhere.

#include "skewlab/system.hpp"

#include <array>

namespace skewlab {

struct RigidityOptions {
  double gate_radius = 0.02;  // beta_i vanishes outside B(q_i, 2 * gate_radius)
  int orbit_depth = 8;        // orbit points f1^n(q_i), 1 <= |n| <= depth, must avoid all gates
  int max_transport_depth = 60;
};

struct RigidityBreaking {
  SkewProductSystem system;
  std::shared_ptr<const SkewProductSystem> reference;
  TorusPoint2 p_u;
  std::array<TorusPoint2, 3> q;
  std::array<double, 3> t;  // q_i = p_u + t_i e_u
  std::array<int, 3> transport_depth;
};

/// Throws NotOnLeaf when some q_i is off the unstable line of p_u,
/// InvalidArgument when the gates overlap, contain p_u or meet a short orbit
/// of some q_i, and NonConvergence when a transport cannot reach
/// holonomy_tol / 10 within max_transport_depth.
RigidityBreaking build_rigidity_breaking(const SkewProductSystem& f, const TorusPoint2& p_u,
                                         const std::array<TorusPoint2, 3>& q,
                                         const std::array<RotationChain, 3>& h,
                                         double holonomy_tol, const RigidityOptions& opt = {});

/// Reason the gate configuration is invalid, or empty when it is admissible.
std::string gate_violation(const SkewProductSystem& f, const TorusPoint2& p_u,
                           const std::array<TorusPoint2, 3>& q, const RigidityOptions& opt);

/// Deterministic scan for three leaf parameters in [t_min, t_max] giving an
/// admissible gate configuration. Throws InvalidArgument if none is found.
std::array<double, 3> find_leaf_parameters(const SkewProductSystem& f, const TorusPoint2& p_u,
                                           const RigidityOptions& opt = {}, double t_min = 0.15,
                                           double t_max = 0.95, int steps = 400);

}  // namespace skewlab
