#include "skewlab/errors.hpp"
#include "skewlab/torus.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <limits>

using namespace skewlab;

TEST(Wrap, Examples) {
  const TorusPoint2 a = wrap(1.25, -0.5);
  EXPECT_DOUBLE_EQ(a.x(), 0.25);
  EXPECT_DOUBLE_EQ(a.y(), 0.5);
  const TorusPoint2 b = wrap(0.0, 0.999);
  EXPECT_EQ(b.x(), 0.0);
  EXPECT_EQ(b.y(), 0.999);
  const TorusPoint2 c = wrap(19.9, 12.3);
  EXPECT_NEAR(c.x(), 0.9, 1e-12);
  EXPECT_NEAR(c.y(), 0.3, 1e-12);
}

TEST(Wrap, RejectsNonFinite) {
  EXPECT_THROW(wrap(std::numeric_limits<double>::infinity(), 0.0), InvalidArgument);
  EXPECT_THROW(wrap(0.0, std::nan("")), InvalidArgument);
}

TEST(Wrap, IdempotentAndInRange) {
  const CounterRng rng(7, 1);
  for (std::uint64_t k = 0; k < 20000; ++k) {
    const double x = (rng.uniform(2 * k) - 0.5) * 2e4, y = (rng.uniform(2 * k + 1) - 0.5) * 1e-3;
    const TorusPoint2 p = wrap(x, y);
    ASSERT_GE(p.x(), 0.0);
    ASSERT_LT(p.x(), 1.0);
    ASSERT_GE(p.y(), 0.0);
    ASSERT_LT(p.y(), 1.0);
    ASSERT_EQ(wrap(p.x(), p.y()), p);
  }
  EXPECT_EQ(wrap(-1e-18, 0.0).x(), 0.0);
}

TEST(TorusDist, Examples) {
  EXPECT_NEAR(torus_dist(TorusPoint2(0, 0), TorusPoint2(0.5, 0.5)), std::sqrt(0.5), 1e-15);
  EXPECT_EQ(torus_dist(TorusPoint2(0.1, 0.1), TorusPoint2(0.1, 0.1)), 0.0);
  EXPECT_NEAR(torus_dist(TorusPoint2(0.95, 0), TorusPoint2(0.05, 0)), 0.1, 1e-12);
}

TEST(TorusDist, MetricAxioms) {
  const CounterRng rng(11, 2);
  for (std::uint64_t k = 0; k < 5000; ++k) {
    const auto p = test::random_point2(rng, 3 * k), q = test::random_point2(rng, 3 * k + 1),
               r = test::random_point2(rng, 3 * k + 2);
    ASSERT_EQ(torus_dist(p, q), torus_dist(q, p));
    ASSERT_LE(torus_dist(p, r), torus_dist(p, q) + torus_dist(q, r) + 1e-12);
    ASSERT_LE(torus_dist(p, q), std::sqrt(0.5) + 1e-15);
  }
}

TEST(IntMatrix, DeterminantEnforced) {
  // the printed "81" entry has det -271
  EXPECT_THROW(IntMatrix2(81, 55, 55, 34), InvalidArgument);
  EXPECT_NO_THROW(IntMatrix2(89, 55, 55, 34));
}

TEST(IntMatrix, FifthPowerOfCat) {
  EXPECT_EQ(cat_matrix().power(5), IntMatrix2(89, 55, 55, 34));
  EXPECT_EQ(cat_matrix() * cat_matrix().inverse(), IntMatrix2());
}

TEST(IntMatrix, ActionInverse) {
  const IntMatrix2 m(89, 55, 55, 34);
  const CounterRng rng(3, 3);
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto p = test::random_point2(rng, k);
    // roundoff bound eps * |M| * |M^-1| with |M| = 144
    ASSERT_LT(torus_dist(m.inverse().act(m.act(p)), p), 144.0 * 144.0 * 1.2e-16);
  }
}

TEST(EigenSplit, Cat) {
  const EigenSplit s = hyperbolic_eigensplit(cat_matrix());
  EXPECT_NEAR(s.lambda_u, test::golden(), 1e-12);
  EXPECT_NEAR(s.dir_u.angle(), std::atan((std::sqrt(5.0) - 1) / 2), 1e-12);
  EXPECT_NEAR(s.dir_u.angle(), 0.5536, 1e-4);
  EXPECT_NEAR(s.lambda_u * s.lambda_s, 1.0, 1e-12);
  EXPECT_GT(s.dir_u.distance(s.dir_s), 1.0);
}

TEST(EigenSplit, IdentityNotHyperbolic) {
  EXPECT_THROW(hyperbolic_eigensplit(IntMatrix2()), NotHyperbolic);
  EXPECT_THROW(hyperbolic_eigensplit(IntMatrix2(1, 1, 0, 1)), NotHyperbolic);
}

TEST(EigenSplit, FifthPower) {
  const EigenSplit s = hyperbolic_eigensplit(IntMatrix2(89, 55, 55, 34));
  EXPECT_NEAR(s.lambda_u, std::pow(test::golden(), 5), 1e-9);
  EXPECT_NEAR(s.lambda_u, 122.9918694, 1e-7);
  EXPECT_LT(s.dir_u.distance(hyperbolic_eigensplit(cat_matrix()).dir_u), 1e-12);
}

TEST(EigenSplit, ConsistencyOnSampledMatrices) {
  for (const IntMatrix2& m : {IntMatrix2(2, 1, 1, 1), IntMatrix2(5, 2, 2, 1), IntMatrix2(3, 1, 2, 1),
                              IntMatrix2(89, 55, 55, 34), IntMatrix2(0, 1, 1, -3),
                              IntMatrix2(1, 1, 1, 0)}) {
    const EigenSplit s = hyperbolic_eigensplit(m);
    const Vec2 mu = m.as_real() * s.vec_u, ms = m.as_real() * s.vec_s;
    EXPECT_LT((mu - s.sign_u * s.lambda_u * s.vec_u).norm(), 1e-10);
    EXPECT_LT((ms - s.sign_s * s.lambda_s * s.vec_s).norm(), 1e-10);
    EXPECT_NEAR(s.lambda_u * s.lambda_s, 1.0, 1e-12);
  }
}

TEST(PushDirection, Examples) {
  const Direction v(0.7);
  EXPECT_NEAR(push_direction(Mat2::Identity(), v).angle(), 0.7, 1e-15);
  const double th = 0.4;
  Mat2 r;
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  EXPECT_NEAR(push_direction(r, Direction(2.9)).angle(), reduce_angle(2.9 + th), 1e-12);
  Mat2 d = Mat2::Zero();
  d(0, 0) = 2;
  d(1, 1) = 1;
  EXPECT_NEAR(push_direction(d, Direction(std::numbers::pi / 4)).angle(), std::atan(0.5), 1e-12);
  EXPECT_THROW(push_direction(Mat2::Zero(), v), SingularMatrix);
}

TEST(PushDirection, Functorial) {
  const CounterRng rng(5, 5);
  for (std::uint64_t k = 0; k < 2000; ++k) {
    Mat2 a, b;
    a << rng.uniform(-2, 2, 9 * k), rng.uniform(-2, 2, 9 * k + 1), rng.uniform(-2, 2, 9 * k + 2),
        rng.uniform(-2, 2, 9 * k + 3);
    b << rng.uniform(-2, 2, 9 * k + 4), rng.uniform(-2, 2, 9 * k + 5),
        rng.uniform(-2, 2, 9 * k + 6), rng.uniform(-2, 2, 9 * k + 7);
    if (std::abs(a.determinant()) < 0.1 || std::abs(b.determinant()) < 0.1) continue;
    const Direction v(rng.uniform(0, std::numbers::pi, 9 * k + 8));
    const Direction one = push_direction(b, push_direction(a, v));
    const Direction two = push_direction(b * a, v);
    ASSERT_LT(one.distance(two), 1e-10);
  }
}

TEST(Direction, ProjectiveDistance) {
  EXPECT_NEAR(Direction(0.01).distance(Direction(std::numbers::pi - 0.01)), 0.02, 1e-12);
  EXPECT_NEAR(Direction(0.0).distance(Direction(std::numbers::pi / 2)), std::numbers::pi / 2,
              1e-15);
  EXPECT_NEAR(Direction::from_vector(Vec2(-1, -1)).angle(), std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(Direction(0.2).signed_offset(Direction(0.1)), -0.1, 1e-15);
}
