#include "skewlab/errors.hpp"
#include "skewlab/transversality.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace skewlab;

namespace {

std::array<TorusPoint2, 3> leaf_points(const SkewProductSystem& f, const TorusPoint2& p,
                                       std::array<double, 3> t) {
  return {leaf_point(f, Leaf::unstable, p, t[0]), leaf_point(f, Leaf::unstable, p, t[1]),
          leaf_point(f, Leaf::unstable, p, t[2])};
}

SearchOptions small_search(std::uint64_t seed) {
  SearchOptions o;
  o.seed = seed;
  o.budget = 64;
  o.batch = 8;
  return o;
}

}  // namespace

TEST(Search, TrialZeroIsIdentity) {
  const auto h = trial_chains(SearchOptions{}, 0);
  for (const auto& c : h) EXPECT_TRUE(c.is_identity());
  const auto h1 = trial_chains(SearchOptions{}, 1);
  EXPECT_FALSE(h1[0].is_identity());
  EXPECT_EQ(h1[0].rotations().size(), 16u);
  for (const auto& r : h1[2].rotations()) EXPECT_LE(std::abs(r.theta()), 0.3);
}

TEST(Search, CoveringCenters) {
  const auto c = covering_centers(4);
  ASSERT_EQ(c.size(), 16u);
  EXPECT_EQ(c.front(), TorusPoint2(0.125, 0.125));
  EXPECT_EQ(c.back(), TorusPoint2(0.875, 0.875));
}

TEST(Search, RejectsNonCoveringRadius) {
  SearchOptions o;
  o.rho = 0.15;  // sqrt(2)/8 > 0.15
  const LineField c = LineField::constant(8, 0.0);
  EXPECT_THROW(search_perturbation(c, c, c, c, o), InvalidArgument);
}

TEST(Search, SeparatesEqualConstantFields) {
  const LineField c = LineField::constant(32, 0.4);
  const SearchResult r = search_perturbation(c, c, c, c, small_search(5));
  ASSERT_TRUE(r.success);
  EXPECT_GE(r.trial, 1u);
  EXPECT_EQ(r.trials_run, r.trial + 1);
  // independent recheck with the returned rotations
  const IntersectionReport again = check_empty_intersection(
      c, pushforward_linefield(FiberDiffeo::from_chain(r.h[0]), c),
      pushforward_linefield(FiberDiffeo::from_chain(r.h[1]), c),
      pushforward_linefield(FiberDiffeo::from_chain(r.h[2]), c));
  EXPECT_TRUE(again.empty);
  EXPECT_EQ(again.min_separation, r.report.min_separation);
}

TEST(Search, DeterministicAcrossWorkers) {
  const LineField c = LineField::constant(32, 1.1);
  SearchOptions o = small_search(9);
  o.workers = 1;
  const SearchResult a = search_perturbation(c, c, c, c, o);
  o.workers = 3;
  const SearchResult b = search_perturbation(c, c, c, c, o);
  EXPECT_EQ(a.success, b.success);
  EXPECT_EQ(a.trial, b.trial);
  EXPECT_EQ(a.report.min_separation, b.report.min_separation);
  EXPECT_EQ(a.h[1].rotations()[3].theta(), b.h[1].rotations()[3].theta());
}

TEST(Search, BudgetExhaustedReportsBest) {
  const LineField c = LineField::constant(8, 0.0);
  SearchOptions o = small_search(2);
  o.budget = 1;  // only the identity trial
  const SearchResult r = search_perturbation(c, c, c, c, o);
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.trials_run, 1u);
  EXPECT_EQ(r.report.min_separation, 0.0);
}

TEST(Alpha, VanishesOnProduct) {
  const SkewProductSystem f = example_system();
  const TorusPoint2 p(0.0, 0.0);
  const auto q = leaf_points(f, p, {0.2, 0.45, 0.8});
  const AlphaMinResult r = alpha_min(f, p, q, 6);
  EXPECT_LT(r.alpha_max, 1e-9);
  EXPECT_EQ(r.n, 6);
  EXPECT_EQ(alpha_angle(f, p, p, TorusPoint2(0.3, 0.2)), 0.0);
}

TEST(Alpha, SameFiberIsZeroOnPerturbed) {
  const SkewProductSystem g = test::perturbed_system(0.3);
  const TorusPoint2 p(0.4, 0.36);
  EXPECT_EQ(alpha_angle(g, p, p, TorusPoint2(0.31, 0.42)), 0.0);
}

TEST(Alpha, DeterministicAcrossWorkers) {
  const SkewProductSystem g = test::perturbed_system(0.3);
  const TorusPoint2 p(0.3, 0.3);
  const auto q = leaf_points(g, p, {0.1, 0.2, 0.3});
  const AlphaMinResult a = alpha_min(g, p, q, 5, {}, 1), b = alpha_min(g, p, q, 5, {}, 3);
  EXPECT_EQ(a.alpha_min, b.alpha_min);
  EXPECT_EQ(a.argmin, b.argmin);
  EXPECT_EQ(a.per_q_max, b.per_q_max);
}

TEST(Alpha, ProfileWindow) {
  const SkewProductSystem f = example_system();
  const AlphaProfile pr = alpha_leaf_profile(f, TorusPoint2(0, 0), 0.3, TorusPoint2(0.2, 0.1), 0.05, 4);
  ASSERT_EQ(pr.t.size(), 9u);
  EXPECT_NEAR(pr.t.front(), 0.25, 1e-15);
  EXPECT_NEAR(pr.t.back(), 0.35, 1e-15);
  for (double a : pr.alpha) EXPECT_LT(a, 1e-9);
}

TEST(AngleFields, ProductFieldsCoincide) {
  auto f = std::make_shared<const SkewProductSystem>(example_system());
  const TorusPoint2 p(0, 0);
  const AngleFields af = angle_fields(f, p, leaf_points(*f, p, {0.2, 0.5, 0.7}), 8);
  EXPECT_EQ(af.w.resolution(), 8);
  const IntersectionReport r = check_empty_intersection(af.w, af.v[0], af.v[1], af.v[2]);
  EXPECT_FALSE(r.empty);
  EXPECT_LT(r.min_separation, 1e-9);
}
