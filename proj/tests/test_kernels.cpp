#include "skewlab/kernels.hpp"
#include "skewlab/rng.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace skewlab;
using namespace skewlab::kernels;

namespace {

PointBatch random_batch(std::size_t n, std::uint64_t seed) {
  const CounterRng rng(seed, 0);
  PointBatch b(n);
  for (std::size_t i = 0; i < n; ++i) {
    b.bx[i] = rng.uniform(4 * i);
    b.by[i] = rng.uniform(4 * i + 1);
    b.fx[i] = rng.uniform(4 * i + 2);
    b.fy[i] = rng.uniform(4 * i + 3);
  }
  // edge values
  b.bx[0] = 0.0;
  b.by[0] = 0.9999999999999999;
  b.fx[1] = 0.5;
  b.fy[1] = 1e-300;
  return b;
}

class AvxEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!avx2_table() || detect_isa() != Isa::avx2) GTEST_SKIP() << "AVX2 not available";
  }
};

}  // namespace

TEST(Kernels, ScalarStepWraps) {
  PointBatch b(1);
  b.bx[0] = 0.1;
  b.by[0] = 0.2;
  b.fx[0] = 0.3;
  b.fy[0] = 0.4;
  const LinearStep s{{89, 55, 55, 34}, {2, 1, 1, 1}};
  scalar_table().step_linear(s, b.bx.data(), b.by.data(), b.fx.data(), b.fy.data(), 1);
  EXPECT_NEAR(b.bx[0], 0.9, 1e-12);
  EXPECT_NEAR(b.by[0], 0.3, 1e-12);
  EXPECT_NEAR(std::min(b.fx[0], 1 - b.fx[0]), 0.0, 1e-12);
  EXPECT_NEAR(b.fy[0], 0.7, 1e-12);
}

TEST(Kernels, ScalarBinIndex) {
  const double bx = 0.99, by = 0.0, fx = 0.5, fy = 0.26;
  std::uint32_t idx = 0;
  scalar_table().bin_index4(4, &bx, &by, &fx, &fy, &idx, 1);
  EXPECT_EQ(idx, ((3u * 4 + 0) * 4 + 2) * 4 + 1);
}

TEST(Kernels, GateMaskWrapsAround) {
  const double bx[3] = {0.99, 0.5, 0.02}, by[3] = {0.0, 0.5, 0.98};
  std::uint8_t mask[3];
  scalar_table().gate_mask(0.01, 0.99, 0.05 * 0.05, bx, by, mask, 3);
  EXPECT_EQ(mask[0], 1);
  EXPECT_EQ(mask[1], 0);
  EXPECT_EQ(mask[2], 1);
}

TEST_F(AvxEquivalence, StepLinearBitIdentical) {
  const LinearStep s{{89, 55, 55, 34}, {2, 1, 1, 1}};
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 1001u}) {
    PointBatch a = random_batch(std::max<std::size_t>(n, 2), n + 1), b = a;
    for (int rep = 0; rep < 5; ++rep) {
      scalar_table().step_linear(s, a.bx.data(), a.by.data(), a.fx.data(), a.fy.data(), n);
      avx2_table()->step_linear(s, b.bx.data(), b.by.data(), b.fx.data(), b.fy.data(), n);
    }
    EXPECT_EQ(a.bx, b.bx);
    EXPECT_EQ(a.by, b.by);
    EXPECT_EQ(a.fx, b.fx);
    EXPECT_EQ(a.fy, b.fy);
  }
}

TEST_F(AvxEquivalence, GateMaskIdentical) {
  const PointBatch p = random_batch(2053, 9);
  std::vector<std::uint8_t> m1(p.size()), m2(p.size());
  for (double r : {0.01, 0.1, 0.3}) {
    scalar_table().gate_mask(0.97, 0.02, r * r, p.bx.data(), p.by.data(), m1.data(), p.size());
    avx2_table()->gate_mask(0.97, 0.02, r * r, p.bx.data(), p.by.data(), m2.data(), p.size());
    EXPECT_EQ(m1, m2);
  }
}

TEST_F(AvxEquivalence, BinIndexIdentical) {
  const PointBatch p = random_batch(4099, 10);
  std::vector<std::uint32_t> a(p.size()), b(p.size());
  for (std::uint32_t m : {1u, 16u, 32u, 255u}) {
    scalar_table().bin_index4(m, p.bx.data(), p.by.data(), p.fx.data(), p.fy.data(), a.data(), p.size());
    avx2_table()->bin_index4(m, p.bx.data(), p.by.data(), p.fx.data(), p.fy.data(), b.data(), p.size());
    EXPECT_EQ(a, b);
  }
}

TEST(Kernels, NamesAndDetection) {
  EXPECT_EQ(isa_name(Isa::scalar), "scalar");
  EXPECT_EQ(isa_name(Isa::avx2), "avx2");
  EXPECT_EQ(scalar_table().isa, Isa::scalar);
  if (detect_isa() == Isa::avx2) {
    ASSERT_NE(avx2_table(), nullptr);
  }
}
