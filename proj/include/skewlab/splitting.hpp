#pragma once

// Pointwise estimates of the invariant splitting E^ss + E^ws + E^wu + E^uu by
// cocycle power iteration, sampled expansion bounds, and the bunching checks.

#include "skewlab/system.hpp"

#include <array>
#include <string>
#include <vector>

namespace skewlab {

enum class Bundle { ss, ws, wu, uu };

std::string_view bundle_name(Bundle b) noexcept;

struct SplittingOptions {
  int max_iter = 200;
  double tol = 1e-10;
};

/// One bundle at one point. Center bundles (ws, wu) live in the fiber tangent
/// plane; `vector` then has zero base components and `fiber_dir` is set.
struct DirectionEstimate {
  Bundle bundle;
  Vec4 vector;
  Direction fiber_dir;
  int iterations = 0;
  double residual = 0.0;
};

/// Throws MaxIterExceeded (carrying the last angular change) on failure.
DirectionEstimate estimate_direction(const SkewProductSystem& f, const TorusPoint4& p,
                                     Bundle bundle, const SplittingOptions& opt = {});

struct SplittingEstimate {
  TorusPoint4 point;
  Vec4 e_ss;
  Vec4 e_uu;
  Direction e_ws;
  Direction e_wu;
  int iterations = 0;   // max over the four bundles
  double residual = 0;  // max over the four bundles
};

SplittingEstimate estimate_splitting(const SkewProductSystem& f, const TorusPoint4& p,
                                     const SplittingOptions& opt = {});

/// One-step expansion ||Df(p) v|| of the unit vector spanning the estimate.
double expansion(const SkewProductSystem& f, const TorusPoint4& p, const DirectionEstimate& e);

struct RateBounds {
  double lo;
  double hi;
};

struct ExpansionBounds {
  RateBounds ss, ws, wu, uu;
  std::size_t points = 0;
  int grid = 0;
};

struct GridOptions {
  int n = 8;                 // points per circle factor
  bool random_offset = false;  // seeded uniform shift of the whole grid
  std::uint64_t seed = 0;
  unsigned workers = 0;
  SplittingOptions splitting{};
};

/// Sampled min/max of the one-step expansion per bundle over an n^4 grid.
ExpansionBounds expansion_rates(const SkewProductSystem& f, const GridOptions& opt = {});

struct Inequality {
  std::string name;
  double lhs;
  double rhs;
  bool strict;
  bool holds;
  double margin;  // rhs - lhs
};

struct ConditionReport {
  ExpansionBounds bounds;
  std::vector<Inequality> ordering;  // condition (a)
  std::vector<Inequality> bunching;  // condition (b)
  Inequality ratio;                  // condition (c)
  bool a = false, b = false, c = false;
  bool all() const noexcept { return a && b && c; }
};

ConditionReport verify_conditions(const ExpansionBounds& bounds);

}  // namespace skewlab
