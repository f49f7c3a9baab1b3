#include "skewlab/errors.hpp"
#include "skewlab/linefield.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace skewlab;

namespace {

LineField wavy(int n, double phase) {
  return LineField::sample(n, [phase](const TorusPoint2& x) {
    return Direction(reduce_angle(phase + 0.8 * std::sin(2 * std::numbers::pi * x.x()) +
                                  0.5 * std::cos(2 * std::numbers::pi * (x.x() + 2 * x.y()))));
  });
}

double max_discrepancy(const LineField& a, const LineField& b, int n) {
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const TorusPoint2 x = TorusPoint2::reduced(double(i) / n, double(j) / n);
      worst = std::max(worst, a.at(x).distance(b.at(x)));
    }
  return worst;
}

}  // namespace

TEST(LineField, StorageAndInterpolation) {
  const LineField c = LineField::constant(8, 3.0);
  EXPECT_NEAR(c.interpolate(TorusPoint2(0.33, 0.71)).angle(), 3.0, 1e-12);
  EXPECT_THROW(LineField(4, std::vector<Direction>(15)), InvalidArgument);
  // interpolation across the mod-pi seam stays near the seam
  std::vector<Direction> v(4, Direction(0.01));
  v[1] = v[3] = Direction(std::numbers::pi - 0.01);
  const LineField seam(2, v);
  const Direction mid = seam.interpolate(TorusPoint2(0.0, 0.25));
  EXPECT_LT(mid.distance(Direction(0.0)), 0.011);
}

TEST(LineField, InterpolationContinuous) {
  const LineField f = LineField::sample(16, [](const TorusPoint2& x) { return Direction(reduce_angle(7 * x.x() + 3 * x.y())); }, false);
  const CounterRng rng(41, 0);
  for (std::uint64_t k = 0; k < 2000; ++k) {
    const TorusPoint2 x = test::random_point2(rng, k);
    const TorusPoint2 y = x.shifted(Vec2(1e-7, -1e-7));
    ASSERT_LT(f.interpolate(x).distance(f.interpolate(y)), 1e-5);
  }
}

TEST(Pushforward, IdentityAndRotation) {
  const LineField v = wavy(32, 0.2);
  EXPECT_LT(max_discrepancy(pushforward_linefield(FiberDiffeo::identity(), v), v, 32), 1e-15);
  const double th = 0.37;
  const LineField rotated = pushforward_linefield(FiberDiffeo::direction_rotation(th), LineField::constant(8, 1.0));
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(rotated.grid(i, 3).angle(), 1.0 + th, 1e-12);
}

TEST(Pushforward, Functorial) {
  const LineField v = wavy(64, 0.9);
  const RotationChain c1({LocalizedRotation(TorusPoint2(0.3, 0.3), 0.15, 0.25)});
  const RotationChain c2({LocalizedRotation(TorusPoint2(0.4, 0.35), 0.12, -0.2),
                          LocalizedRotation(TorusPoint2(0.8, 0.1), 0.1, 0.3)});
  const FiberDiffeo h1 = FiberDiffeo::from_chain(c1), h2 = FiberDiffeo::from_chain(c2);
  const LineField once = pushforward_linefield(compose(h1, h2), v);
  const LineField twice = pushforward_linefield(h1, pushforward_linefield(h2, v));
  EXPECT_LT(max_discrepancy(once, twice, 64), 1e-6);
}

TEST(Pushforward, LinearAutomorphism) {
  // A_* of the constant stable direction of A is itself
  const EigenSplit s = hyperbolic_eigensplit(cat_matrix());
  const LineField ws = LineField::constant(16, s.dir_s.angle());
  const LineField img = pushforward_linefield(FiberDiffeo::from_matrix(cat_matrix()), ws);
  EXPECT_LT(max_discrepancy(img, ws, 16), 1e-12);
}

TEST(Intersection, AllEqualIsNonEmpty) {
  const LineField c = LineField::constant(16, 0.5);
  const IntersectionReport r = check_empty_intersection(c, c, c, c);
  EXPECT_FALSE(r.empty);
  EXPECT_EQ(r.witnesses.size(), 256u);
  EXPECT_EQ(r.min_separation, 0.0);
}

TEST(Intersection, DistinctConstantsEmpty) {
  const IntersectionReport r =
      check_empty_intersection(LineField::constant(16, 0), LineField::constant(16, 0.3),
                               LineField::constant(16, 0.6), LineField::constant(16, 0.9));
  EXPECT_TRUE(r.empty);
  EXPECT_TRUE(r.witnesses.empty());
  EXPECT_NEAR(r.min_separation, 0.9, 1e-12);
}

TEST(Intersection, ResolutionMismatch) {
  EXPECT_THROW(check_empty_intersection(LineField::constant(8, 0), LineField::constant(16, 0),
                                        LineField::constant(16, 0), LineField::constant(16, 0)),
               ResolutionMismatch);
}

TEST(Intersection, FindsIsolatedCoincidence) {
  // the four fields coincide only near x = (0.3, 0.7); off-grid point
  const TorusPoint2 z(0.3037, 0.7011);
  auto field = [z](double slope) {
    return LineField::sample(16, [z, slope](const TorusPoint2& x) {
      const Vec2 d = displacement(z, x);
      return Direction(reduce_angle(1.0 + slope * d.x() + slope * slope * d.y()));
    });
  };
  const IntersectionReport r = check_empty_intersection(field(0.0), field(0.5), field(1.0), field(-1.0), {});
  EXPECT_FALSE(r.empty);
  ASSERT_FALSE(r.witnesses.empty());
  EXPECT_LT(torus_dist(r.witnesses.front().x, z), 0.01);
  EXPECT_GT(r.refined_cells, 0u);
}

TEST(Intersection, MonotoneInTolerance) {
  const LineField w = wavy(24, 0.0), v1 = wavy(24, 0.05), v2 = wavy(24, 0.1), v3 = wavy(24, -0.08);
  bool seen_empty = false;
  for (double tol : {0.3, 0.2, 0.15, 0.1, 0.05, 0.02, 1e-3, 1e-6}) {
    IntersectionOptions o;
    o.angle_tol = tol;
    const bool e = check_empty_intersection(w, v1, v2, v3, o).empty;
    if (seen_empty) {
      EXPECT_TRUE(e) << tol;
    }
    seen_empty = seen_empty || e;
  }
  EXPECT_TRUE(seen_empty);
}
