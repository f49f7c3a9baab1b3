#pragma once

// Line fields on the fiber torus, their pushforwards by fiber
// diffeomorphisms, and the four-field empty-intersection test.

#include "skewlab/rotation.hpp"
#include "skewlab/torus.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace skewlab {

/// Type-erased diffeomorphism of T^2 with inverse and derivative.
struct FiberDiffeo {
  std::function<TorusPoint2(const TorusPoint2&)> forward;
  std::function<TorusPoint2(const TorusPoint2&)> inverse;
  std::function<Mat2(const TorusPoint2&)> jacobian;

  static FiberDiffeo identity();
  static FiberDiffeo from_chain(RotationChain chain);
  static FiberDiffeo from_matrix(const IntMatrix2& m);
  /// Linear rotation of R^2 acting on directions only (not a torus map);
  /// used to test pushforwards against isometries.
  static FiberDiffeo direction_rotation(double angle);
};

/// first o second
FiberDiffeo compose(const FiberDiffeo& first, const FiberDiffeo& second);

/// n x n grid of directions at the points (i/n, j/n), stored with i (the x
/// index) major. When an exact evaluator is attached, at() uses it; grid
/// values are then its samples.
class LineField {
 public:
  using Evaluator = std::function<Direction(const TorusPoint2&)>;

  LineField(int n, std::vector<Direction> values, Evaluator exact = nullptr);

  static LineField constant(int n, double angle);
  static LineField sample(int n, Evaluator fn, bool keep_exact = true);

  int resolution() const noexcept { return n_; }
  const Direction& grid(int i, int j) const { return values_[index(i, j)]; }
  const std::vector<Direction>& values() const noexcept { return values_; }
  bool has_exact() const noexcept { return bool(exact_); }

  /// Exact evaluator if present, else projective bilinear interpolation.
  Direction at(const TorusPoint2& x) const;
  Direction interpolate(const TorusPoint2& x) const;

 private:
  std::size_t index(int i, int j) const {
    const int a = ((i % n_) + n_) % n_, b = ((j % n_) + n_) % n_;
    return std::size_t(a) * std::size_t(n_) + std::size_t(b);
  }
  int n_;
  std::vector<Direction> values_;
  Evaluator exact_;
};

/// (h_* V)(x) = [Dh(h^{-1} x) V(h^{-1} x)], evaluated exactly on demand.
LineField pushforward_linefield(const FiberDiffeo& h, const LineField& v);

struct Witness {
  TorusPoint2 x;
  Direction w;
  Direction v[3];
  double separation;  // max pairwise angular distance
};

struct IntersectionReport {
  bool empty = true;
  double angle_tol = 0.0;
  std::vector<Witness> witnesses;
  double min_separation = 0.0;  // min over evaluated points of the max pairwise separation
  TorusPoint2 argmin;
  std::size_t refined_cells = 0;
  std::size_t evaluated_points = 0;
};

struct IntersectionOptions {
  double angle_tol = 1e-3;
  int refine_levels = 4;
  int refine_factor = 4;
  std::size_t max_refined_cells = 200000;
  std::size_t max_witnesses = 10000;
};

/// Scans the common grid and refines cells where all three V_i may cross W.
IntersectionReport check_empty_intersection(const LineField& w, const LineField& v1,
                                            const LineField& v2, const LineField& v3,
                                            const IntersectionOptions& opt = {});

}  // namespace skewlab
