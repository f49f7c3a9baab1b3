#include "skewlab/errors.hpp"
#include "skewlab/rotation.hpp"
#include "skewlab/system.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace skewlab;

namespace {

double rel_err(const Mat4& a, const Mat4& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

Mat4 central_fd(const SkewProductSystem& f, const TorusPoint4& p, double h) {
  Mat4 j;
  const TorusPoint4 y = f.apply(p);
  for (int c = 0; c < 4; ++c) {
    Vec4 e = Vec4::Zero();
    e[c] = h;
    const TorusPoint4 plus{p.base.shifted(e.head<2>()), p.fiber.shifted(e.tail<2>())};
    const TorusPoint4 minus{p.base.shifted(-e.head<2>()), p.fiber.shifted(-e.tail<2>())};
    const TorusPoint4 a = f.apply(plus), b = f.apply(minus);
    // differences measured around the image point to avoid wrap jumps
    const Vec2 db = displacement(y.base, a.base) - displacement(y.base, b.base);
    const Vec2 df = displacement(y.fiber, a.fiber) - displacement(y.fiber, b.fiber);
    j.block<2, 1>(0, c) = db / (2 * h);
    j.block<2, 1>(2, c) = df / (2 * h);
  }
  return j;
}

}  // namespace

TEST(Smoothstep, Profile) {
  EXPECT_EQ(smoothstep(-1.0), 0.0);
  EXPECT_EQ(smoothstep(0.0), 0.0);
  EXPECT_EQ(smoothstep(1.0), 1.0);
  EXPECT_EQ(smoothstep(2.0), 1.0);
  EXPECT_NEAR(smoothstep(0.5), 0.5, 1e-15);
  EXPECT_EQ(smoothstep_deriv(0.0), 0.0);
  EXPECT_EQ(smoothstep_deriv(1.0), 0.0);
  const double h = 1e-6;
  for (double s : {0.1, 0.3, 0.77}) EXPECT_NEAR(smoothstep_deriv(s), (smoothstep(s + h) - smoothstep(s - h)) / (2 * h), 1e-8);
}

TEST(LocalizedRotation, RejectsBadParameters) {
  EXPECT_THROW(LocalizedRotation(TorusPoint2(0.5, 0.5), 0.25, 0.1), InvalidArgument);
  EXPECT_THROW(LocalizedRotation(TorusPoint2(0.5, 0.5), 0.1, 3.2), InvalidArgument);
  EXPECT_THROW(LocalizedRotation(TorusPoint2(0.5, 0.5), 0.1, 0.5), InvalidArgument);
  EXPECT_NO_THROW(LocalizedRotation(TorusPoint2(0.5, 0.5), 0.1, 0.3));
  EXPECT_GT(max_safe_angle(), 0.3);
}

TEST(LocalizedRotation, RotatesInsideFixesOutside) {
  const LocalizedRotation r(TorusPoint2(0.5, 0.5), 0.1, 0.3);
  const TorusPoint2 in(0.55, 0.5), out(0.75, 0.5);
  const TorusPoint2 img = r.apply(in);
  EXPECT_NEAR(img.x(), 0.5 + 0.05 * std::cos(0.3), 1e-15);
  EXPECT_NEAR(img.y(), 0.5 + 0.05 * std::sin(0.3), 1e-15);
  EXPECT_EQ(r.apply(out), out);
  EXPECT_TRUE(r.outside(out));
  EXPECT_EQ(LocalizedRotation(TorusPoint2(0.5, 0.5), 0.1, 0.0).apply(in), in);
}

TEST(LocalizedRotation, InverseAndJacobian) {
  const LocalizedRotation r(TorusPoint2(0.02, 0.97), 0.15, -0.28);
  const CounterRng rng(1, 9);
  for (std::uint64_t k = 0; k < 2000; ++k) {
    const auto y = test::random_point2(rng, k);
    const double s = rng.uniform(2 * k + 100000);
    ASSERT_LT(torus_dist(r.inverse(r.apply(y, s), s), y), 1e-13);
    const Mat2 j = r.jacobian(y, s);
    ASSERT_GT(j.determinant(), 0.1);
    Mat2 fd;
    const double h = 1e-6;
    for (int c = 0; c < 2; ++c) {
      Vec2 e = Vec2::Zero();
      e[c] = h;
      fd.col(c) = (displacement(y, r.apply(y.shifted(e), s)) - displacement(y, r.apply(y.shifted(-e), s))) / (2 * h);
    }
    ASSERT_LT((fd - j).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(RotationChain, InverseOrder) {
  const RotationChain c = test::sample_chain(0.3);
  const CounterRng rng(2, 9);
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto y = test::random_point2(rng, k);
    ASSERT_LT(torus_dist(c.inverse(c.apply(y, 0.7), 0.7), y), 1e-13);
    const auto e = c.evaluate(y, 0.7);
    ASSERT_EQ(e.point, c.apply(y, 0.7));
  }
  EXPECT_TRUE(test::sample_chain(0.0).is_identity());
}

TEST(MakeProduct, Domination) {
  EXPECT_NO_THROW(make_product(IntMatrix2(89, 55, 55, 34), cat_matrix()));
  EXPECT_THROW(make_product(cat_matrix(), cat_matrix()), DominationViolated);
  EXPECT_THROW(make_product(cat_matrix(), IntMatrix2(89, 55, 55, 34)), DominationViolated);
  EXPECT_NO_THROW(make_product(IntMatrix2(5, 2, 2, 1), cat_matrix()));
  EXPECT_THROW(make_product(IntMatrix2(), cat_matrix()), NotHyperbolic);
  EXPECT_NO_THROW(make_product_unchecked(cat_matrix(), IntMatrix2(89, 55, 55, 34)));
}

TEST(Apply, ExampleAndFixedPoint) {
  const SkewProductSystem f = example_system();
  const TorusPoint4 y = f.apply({TorusPoint2(0.1, 0.2), TorusPoint2(0.3, 0.4)});
  EXPECT_LT(torus_dist(y.base, TorusPoint2(0.9, 0.3)), 1e-12);
  EXPECT_LT(torus_dist(y.fiber, TorusPoint2(0.0, 0.7)), 1e-12);
  const TorusPoint4 o{TorusPoint2(0, 0), TorusPoint2(0, 0)};
  EXPECT_EQ(f.apply(o), o);
}

TEST(Apply, ZeroAnglesMatchProduct) {
  const SkewProductSystem f = example_system(), g = test::perturbed_system(0.0);
  EXPECT_TRUE(g.is_product());
  const CounterRng rng(4, 4);
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto p = test::random_point4(rng, k);
    ASSERT_EQ(g.apply(p), f.apply(p));
    ASSERT_EQ(g.apply_inverse(p), f.apply_inverse(p));
  }
}

TEST(Apply, SkewStructure) {
  const SkewProductSystem g = test::perturbed_system(0.3);
  const CounterRng rng(8, 8);
  for (std::uint64_t k = 0; k < 500; ++k) {
    const auto p = test::random_point4(rng, k);
    const TorusPoint4 q{p.base, test::random_point2(rng, k + 10000)};
    ASSERT_EQ(g.apply(p).base, g.apply(q).base);
  }
}

TEST(Apply, RoundTrip) {
  const SkewProductSystem g = test::perturbed_system(0.3);
  const CounterRng rng(10, 10);
  double worst = 0;
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const auto p = test::random_point4(rng, k);
    worst = std::max(worst, torus_dist(g.apply(g.apply_inverse(p)), p));
    worst = std::max(worst, torus_dist(g.apply_inverse(g.apply(p)), p));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Apply, Locality) {
  const SkewProductSystem f = example_system(), g = test::perturbed_system(0.3);
  const auto& pert = std::get<FiberPerturbation>(g.perturbations()[0]);
  const CounterRng rng(12, 12);
  int checked = 0;
  for (std::uint64_t k = 0; k < 5000; ++k) {
    const auto p = test::random_point4(rng, k);
    bool outside_all = true;
    for (const auto& r : pert.rotations.rotations()) outside_all = outside_all && r.outside(p.fiber);
    if (pert.gate.weight(p.base) == 0.0 || outside_all) {
      ASSERT_EQ(g.apply(p), f.apply(p));
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(Jacobian, ProductIsBlockDiagonal) {
  const SkewProductSystem f = example_system();
  const Mat4 j = f.jacobian({TorusPoint2(0.3, 0.1), TorusPoint2(0.8, 0.2)});
  Mat4 expect = Mat4::Zero();
  expect.block<2, 2>(0, 0) = IntMatrix2(89, 55, 55, 34).as_real();
  expect.block<2, 2>(2, 2) = cat_matrix().as_real();
  EXPECT_EQ(j, expect);
}

TEST(Jacobian, MatchesFiniteDifferences) {
  const SkewProductSystem g = test::perturbed_system(0.3);
  const CounterRng rng(13, 13);
  double worst = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto p = test::random_point4(rng, k);
    const Mat4 j = g.jacobian(p);
    ASSERT_TRUE((j.block<2, 2>(0, 2).array() == 0.0).all());
    worst = std::max(worst, rel_err(j, central_fd(g, p, 1e-6)));
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(Batch, MatchesPointwiseApply) {
  const SkewProductSystem g = test::perturbed_system(0.3);
  const CounterRng rng(14, 14);
  const std::size_t n = 1037;
  kernels::PointBatch b(n);
  std::vector<TorusPoint4> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    pts[k] = test::random_point4(rng, k);
    b.bx[k] = pts[k].base.x();
    b.by[k] = pts[k].base.y();
    b.fx[k] = pts[k].fiber.x();
    b.fy[k] = pts[k].fiber.y();
  }
  for (int step = 0; step < 3; ++step) {
    g.apply_batch(b, 0, n);
    for (std::size_t k = 0; k < n; ++k) pts[k] = g.apply(pts[k]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    ASSERT_EQ(b.bx[k], pts[k].base.x());
    ASSERT_EQ(b.by[k], pts[k].base.y());
    ASSERT_EQ(b.fx[k], pts[k].fiber.x());
    ASSERT_EQ(b.fy[k], pts[k].fiber.y());
  }
}

TEST(Describe, HashStable) {
  EXPECT_EQ(example_system().hash(), make_product(IntMatrix2(89, 55, 55, 34), cat_matrix()).hash());
  EXPECT_NE(example_system().hash(), test::perturbed_system(0.3).hash());
  EXPECT_NE(test::perturbed_system(0.3).hash(), test::perturbed_system(0.2).hash());
}
