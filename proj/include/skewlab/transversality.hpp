#pragma once

// Randomized search for fiber rotations making four line fields have no
// common point, and the angle function between E^ws and its holonomy
// transports.

#include "skewlab/holonomy.hpp"
#include "skewlab/linefield.hpp"
#include "skewlab/splitting.hpp"

#include <array>

namespace skewlab {

struct SearchOptions {
  int grid = 4;            // rotation centers on a grid x grid lattice
  double rho = 0.2;        // inner radius of every rotation
  double theta_max = 0.3;  // angles drawn from (-theta, theta), clamped to max_safe_angle()
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::size_t batch = 32;  // trials evaluated per parallel round
  IntersectionOptions check{};
};

struct SearchResult {
  std::array<RotationChain, 3> h;
  IntersectionReport report;
  bool success = false;  // false: budget exhausted, h is the best found
  std::size_t trial = 0;
  std::size_t trials_run = 0;
  double angle_bound = 0.0;
};

/// Centers of the covering lattice ((a + 1/2)/g, (b + 1/2)/g).
std::vector<TorusPoint2> covering_centers(int grid);

/// Chains for trial `trial` (trial 0 is all-zero angles).
std::array<RotationChain, 3> trial_chains(const SearchOptions& opt, std::size_t trial);

SearchResult search_perturbation(const LineField& w, const LineField& v1, const LineField& v2,
                                 const LineField& v3, const SearchOptions& opt = {});

struct AlphaOptions {
  HolonomyOptions holonomy{};
  SplittingOptions splitting{};
};

/// E^ws(p_u, x) and the transported line over p_u coming from q.
Direction transported_ws(const SkewProductSystem& f, const TorusPoint2& p_u,
                         const TorusPoint2& q, const TorusPoint2& x, const AlphaOptions& opt = {});
Direction ws_direction(const SkewProductSystem& f, const TorusPoint2& base,
                       const TorusPoint2& x, const SplittingOptions& opt = {});

/// Angle between E^ws(p_u, x) and DH^u_{q->p_u} E^ws(q, H^u_{p_u->q}(x)).
double alpha_angle(const SkewProductSystem& f, const TorusPoint2& p_u, const TorusPoint2& q,
                   const TorusPoint2& x, const AlphaOptions& opt = {});

struct AlphaMinResult {
  double alpha_min = 0.0;
  TorusPoint2 argmin;
  double alpha_max = 0.0;             // max over the grid of alpha(x)
  std::array<double, 3> per_q_max{};  // max over the grid of alpha(x, q_i)
  int n = 0;
};

/// min over the n x n fiber grid of max_i alpha(x, q_i).
AlphaMinResult alpha_min(const SkewProductSystem& f, const TorusPoint2& p_u,
                         const std::array<TorusPoint2, 3>& q, int n, const AlphaOptions& opt = {},
                         unsigned workers = 0);

/// alpha(x, p_u + t e_u) for t on a window around t_center, and the
/// connected interval around t_center where it stays >= half its value there.
struct AlphaProfile {
  std::vector<double> t;
  std::vector<double> alpha;
  double center_value = 0.0;
  double lo = 0.0, hi = 0.0;  // interval endpoints in t
};
AlphaProfile alpha_leaf_profile(const SkewProductSystem& f, const TorusPoint2& p_u,
                                double t_center, const TorusPoint2& x, double half_width,
                                int steps, const AlphaOptions& opt = {});

/// W = E^ws over p_u and V_i = holonomy transports of E^ws over q_i, with
/// exact evaluators attached.
struct AngleFields {
  LineField w;
  std::array<LineField, 3> v;
};
AngleFields angle_fields(std::shared_ptr<const SkewProductSystem> f, const TorusPoint2& p_u,
                         const std::array<TorusPoint2, 3>& q, int n, const AlphaOptions& opt = {});

}  // namespace skewlab
