#include <chrono>
#include <random>

#include <gtest/gtest.h>

#include "support/test_util.hpp"
#include "varmatch/error.hpp"
#include "varmatch/stats.hpp"

using namespace varmatch;

TEST(Integral, SinglePixel) {
  const IntegralTable t = build_integral(testutil::constant_image(1, 1, 1, 5));
  EXPECT_EQ(t.sum()(1, 1), 5);
  EXPECT_EQ(t.sum_sq()(1, 1), 25);
  EXPECT_EQ(t.sum()(0, 1), 0);
  EXPECT_EQ(t.sum()(1, 0), 0);
}

TEST(Integral, AllZero) {
  const IntegralTable t = build_integral(Image(7, 4, 1));
  EXPECT_EQ(t.sum().rows(), 5);
  EXPECT_EQ(t.sum().cols(), 8);
  EXPECT_TRUE((t.sum() == 0).all());
  EXPECT_TRUE((t.sum_sq() == 0).all());
}

TEST(Integral, MatchesBruteForcePrefixSums) {
  std::mt19937 gen(16);
  const Image img = testutil::random_image(gen, 16, 16, 1);
  const auto g = testutil::to_gray(img);
  const IntegralTable t = build_integral(img);
  for (int r = 0; r <= 16; ++r)
    for (int c = 0; c <= 16; ++c) {
      ASSERT_EQ(t.sum()(r, c), oracle::prefix_sum(g, r, c, false));
      ASSERT_EQ(t.sum_sq()(r, c), oracle::prefix_sum(g, r, c, true));
    }
}

TEST(Integral, MonotoneAndCauchySchwarz) {
  std::mt19937 gen(2);
  const Image img = testutil::random_image(gen, 23, 19, 1);
  const IntegralTable t = build_integral(img);
  for (int r = 0; r <= 19; ++r)
    for (int c = 1; c <= 23; ++c) {
      EXPECT_LE(t.sum()(r, c - 1), t.sum()(r, c));
      EXPECT_LE(t.sum_sq()(r, c - 1), t.sum_sq()(r, c));
    }
  for (int r = 1; r <= 19; ++r)
    for (int c = 0; c <= 23; ++c) EXPECT_LE(t.sum()(r - 1, c), t.sum()(r, c));
  std::uniform_int_distribution<int> d(0, 1000);
  for (int i = 0; i < 500; ++i) {
    const int w = 1 + d(gen) % 23, h = 1 + d(gen) % 19;
    const int x = d(gen) % (24 - w), y = d(gen) % (20 - h);
    const __int128 s = t.rect_sum(x, y, w, h);
    EXPECT_GE(static_cast<__int128>(t.rect_sum_sq(x, y, w, h)) * w * h, s * s);
  }
}

TEST(Integral, Errors) {
  try {
    build_integral(Image(4, 4, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::multichannel_input);
  }
  try {
    check_integral_capacity(1LL << 32, 1LL << 30);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::overflow_risk);
  }
  EXPECT_NO_THROW(check_integral_capacity(1 << 16, 1 << 16));
}

TEST(PatchStats, Constant) {
  const IntegralTable t = build_integral(testutil::constant_image(40, 30, 1, 7));
  for (int s : {1, 3, 17, 30}) {
    const PatchStats st = patch_stats(t, 40 - s, 30 - s, s, s);
    EXPECT_EQ(st.mean, 7.0);
    EXPECT_EQ(st.variance, 0.0);
  }
}

TEST(PatchStats, TwoValuePatch) {
  Image img(2, 2, 1);
  img.at(0, 0, 1) = 255;
  img.at(0, 1, 1) = 255;
  const PatchStats st = patch_stats(build_integral(img), 0, 0, 2, 2);
  EXPECT_DOUBLE_EQ(st.mean, 127.5);
  EXPECT_DOUBLE_EQ(st.variance, 16256.25);
}

TEST(PatchStats, MatchesTwoPassOracle) {
  std::mt19937 gen(32);
  const Image img = testutil::random_image(gen, 80, 70, 1);
  const auto g = testutil::to_gray(img);
  const IntegralTable t = build_integral(img);
  std::uniform_int_distribution<int> pos(0, 70 - 32);
  for (int i = 0; i < 100; ++i) {
    const int x = pos(gen), y = pos(gen);
    const PatchStats st = patch_stats(t, x, y, 32, 32);
    const auto [m, v] = oracle::two_pass_stats(g, x, y, 32, 32);
    EXPECT_NEAR(st.mean, static_cast<double>(m), 1e-9 * static_cast<double>(m));
    EXPECT_NEAR(st.variance, static_cast<double>(v), 1e-9 * static_cast<double>(v));
    const PatchStats naive = naive_patch_stats(img, x, y, 32, 32);
    EXPECT_NEAR(naive.variance, st.variance, 1e-9 * st.variance);
  }
}

TEST(PatchStats, LowVarianceNeverNegative) {
  // Large bright patches with one differing pixel: the cancellation-prone case.
  Image img = testutil::constant_image(256, 256, 1, 250);
  img.at(0, 100, 100) = 251;
  const IntegralTable t = build_integral(img);
  const PatchStats st = patch_stats(t, 0, 0, 256, 256);
  const double n = 256.0 * 256.0;
  EXPECT_GE(st.variance, 0.0);
  EXPECT_NEAR(st.variance, (n - 1) / (n * n), 1e-18);
  EXPECT_EQ(patch_stats(t, 0, 0, 50, 50).variance, 0.0);
}

TEST(PatchStats, TranslationOverConstantRegion) {
  std::mt19937 gen(9);
  Image img = testutil::random_image(gen, 64, 64, 1);
  img.data().block(10, 10, 40, 40).setConstant(77);
  const IntegralTable t = build_integral(img);
  for (int dx = 0; dx < 20; dx += 3) {
    const PatchStats st = patch_stats(t, 10 + dx, 12, 20, 20);
    EXPECT_EQ(st.mean, 77.0);
    EXPECT_EQ(st.variance, 0.0);
  }
}

TEST(PatchStats, BoundsAndRange) {
  std::mt19937 gen(1);
  const IntegralTable t = build_integral(testutil::random_image(gen, 10, 8, 1));
  for (auto [x, y, w, h] : {std::array{-1, 0, 2, 2}, {0, 0, 11, 1}, {9, 7, 2, 1}, {0, 0, 0, 3}}) {
    try {
      patch_stats(t, x, y, w, h);
      FAIL() << x << "," << y << "," << w << "," << h;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::out_of_bounds);
    }
  }
  const PatchStats full = patch_stats(t, 0, 0, 10, 8);
  EXPECT_GE(full.mean, 0.0);
  EXPECT_LE(full.mean, 255.0);
  EXPECT_LE(full.variance, 127.5 * 127.5);
}

TEST(WindowGrid, RowMajorAndSkipsOversize) {
  const auto g = window_grid(10, 6, 4, 3);
  ASSERT_EQ(g.size(), 3u * 1u);
  EXPECT_EQ(g[0].x, 0);
  EXPECT_EQ(g[1].x, 3);
  EXPECT_EQ(g[2].x, 6);
  EXPECT_TRUE(window_grid(10, 3, 4, 1).empty());
  EXPECT_EQ(window_grid(8, 8, 4, 4).size(), 4u);
}

TEST(PatchStats, CostIndependentOfPatchSize) {
  std::mt19937 gen(44);
  const IntegralTable t = build_integral(testutil::random_image(gen, 512, 512, 1));
  using Clock = std::chrono::steady_clock;
  auto time_for = [&](int s) {
    volatile double sink = 0;
    const auto start = Clock::now();
    for (int i = 0; i < 20000; ++i) sink = sink + patch_stats(t, i % 7, i % 5, s, s).variance;
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  const double small = time_for(8);
  const double large = time_for(500);
  // Loose bound: a per-pixel loop would be thousands of times slower.
  EXPECT_LT(large, 20 * small + 0.05);
}
