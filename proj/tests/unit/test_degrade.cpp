#include <random>

#include <gtest/gtest.h>

#include "support/test_util.hpp"
#include "varmatch/degrade.hpp"
#include "varmatch/error.hpp"
#include "varmatch/resample.hpp"
#include "varmatch/synthetic.hpp"

using namespace varmatch;
using testutil::TempDir;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no varmatch::Error thrown";
  return Errc::config_error;
}

NoiseBank zero_bank(int side = 32) {
  NoiseBank bank;
  bank.side = side;
  bank.var_threshold = 1.0;
  NoiseTile t;
  t.residual = PlaneD::Zero(side, side);
  bank.tiles.push_back(t);
  return bank;
}

// Residual of +3 on the left half and -3 on the right half.
NoiseBank split_bank(int side = 32) {
  NoiseBank bank = zero_bank(side);
  bank.tiles[0].residual.leftCols(side / 2).setConstant(3.0);
  bank.tiles[0].residual.rightCols(side / 2).setConstant(-3.0);
  return bank;
}

std::vector<NamedImage> mixed_sources() {
  std::mt19937 gen(14);
  std::vector<NamedImage> out;
  for (int i = 0; i < 3; ++i) {
    Image img = testutil::random_image(gen, 96 + 16 * i, 80, 1, 0, 255);
    // Quiet regions of varying strength among loud noise.
    for (int k = 0; k < 4; ++k) {
      std::uniform_int_distribution<int> q(120 - 2 * k, 120 + 2 * k);
      for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) img.at(0, y + 32 * (k % 2), x + 32 * (k / 2)) = q(gen);
    }
    out.push_back({"src" + std::to_string(i), img});
  }
  return out;
}

}  // namespace

TEST(NoiseBank, ConstantImageQualifiesEverywhere) {
  const NoiseBank bank =
      extract_noise_patches({{"c", testutil::constant_image(64, 96, 1, 40)}}, 20.0, 32, 32);
  EXPECT_EQ(bank.size(), 6u);
  for (const auto& t : bank.tiles) {
    EXPECT_TRUE((t.residual == 0.0).all());
    EXPECT_EQ(t.source.variance, 0.0);
  }
  EXPECT_EQ(bank.tiles[1].source.x, 32);
  EXPECT_EQ(bank.tiles[2].source.y, 32);
}

TEST(NoiseBank, CheckerboardIsEmpty) {
  EXPECT_EQ(code_of([] { extract_noise_patches({{"cb", testutil::checkerboard(64, 64)}}, 64.0); }),
            Errc::empty_bank);
}

TEST(NoiseBank, CountMatchesBruteForceScan) {
  const auto sources = mixed_sources();
  const NoiseBank bank = extract_noise_patches(sources, 20.0, 32, 32);
  std::size_t expected = 0;
  for (const auto& s : sources) {
    expected += oracle::low_variance_windows(testutil::to_gray(s.image), 32, 32, 20.0).size();
  }
  EXPECT_EQ(bank.size(), expected);
  EXPECT_GT(expected, 3u);
}

TEST(NoiseBank, TilesAreZeroMeanAndBelowThreshold) {
  const auto sources = mixed_sources();
  for (int stride : {8, 32}) {
    const NoiseBank bank = extract_noise_patches(sources, 20.0, 32, stride);
    for (const auto& t : bank.tiles) {
      EXPECT_LT(std::abs(t.residual.mean()), 1e-9);
      EXPECT_LT(t.source.variance, 20.0);
      const auto* src = &sources[0];
      for (const auto& s : sources)
        if (s.id == t.source.image_id) src = &s;
      const auto [m, v] = oracle::two_pass_stats(testutil::to_gray(src->image), t.source.x,
                                                 t.source.y, 32, 32);
      EXPECT_NEAR(t.source.variance, static_cast<double>(v), 1e-9);
      EXPECT_NEAR(t.residual(0, 0) + static_cast<double>(m),
                  src->image.at(0, t.source.y, t.source.x), 1e-9);
    }
  }
}

TEST(NoiseBank, RgbTilesPerChannel) {
  std::mt19937 gen(3);
  Image img = testutil::random_image(gen, 32, 32, 3, 100, 103);
  const NoiseBank bank = extract_noise_patches({{"rgb", img}}, 20.0, 32, 32);
  ASSERT_EQ(bank.size(), 1u);
  EXPECT_EQ(bank.channels(), 3);
  for (int c = 0; c < 3; ++c) EXPECT_LT(std::abs(bank.tiles[0].plane(c).mean()), 1e-9);
}

TEST(NoiseBank, PreconditionErrors) {
  EXPECT_EQ(code_of([] { extract_noise_patches({{"s", Image(16, 16, 1)}}, 20.0, 32, 32); }),
            Errc::image_too_small);
  EXPECT_EQ(code_of([] { extract_noise_patches({{"s", Image(64, 64, 1)}}, 20.0, 32, 0); }),
            Errc::config_error);
  EXPECT_EQ(code_of([] {
              extract_noise_patches({{"a", Image(64, 64, 1)}, {"b", Image(64, 64, 3)}}, 20.0);
            }),
            Errc::format_error);
}

TEST(Degrade, ZeroBankEqualsBicubic) {
  std::mt19937 gen(6);
  for (int ch : {1, 3}) {
    const Image hr = testutil::random_image(gen, 203, 157, ch);
    Rng rng(1);
    EXPECT_EQ(degrade_image(hr, zero_bank(), 4, rng),
              bicubic_resize(hr, ResampleSpec::downscale(4)));
  }
}

TEST(Degrade, ZeroMeanResidualKeepsMean) {
  const Image hr = testutil::constant_image(256, 256, 1, 128);
  Rng rng(3);
  const Image lr = degrade_image(hr, split_bank(), 4, rng);
  ASSERT_EQ(lr.width(), 64);
  const double mean = lr.data().cast<double>().mean();
  EXPECT_NEAR(mean, 128.0, 0.5);
  EXPECT_EQ(lr.at(0, 0, 0), 131);
  EXPECT_EQ(lr.at(0, 0, 31), 125);
}

TEST(Degrade, EqualsCompositionOracle) {
  const NoiseBank bank = extract_noise_patches(mixed_sources(), 20.0, 32, 8);
  std::mt19937 gen(10);
  const Image hr = testutil::random_image(gen, 300, 270, 1);
  Rng a(55);
  const Image got = degrade_image(hr, bank, 4, a);

  // Separate downsample and separate tile addition with the same seed.
  const Image down = bicubic_resize(hr, ResampleSpec::downscale(4));
  Rng b(55);
  Image want(down.width(), down.height(), 1);
  for (int y0 = 0; y0 < down.height(); y0 += 32)
    for (int x0 = 0; x0 < down.width(); x0 += 32) {
      const auto& tile = bank.tiles[b.uniform_below(bank.size())];
      for (int y = y0; y < std::min(y0 + 32, down.height()); ++y)
        for (int x = x0; x < std::min(x0 + 32, down.width()); ++x) {
          const double v = down.at(0, y, x) + tile.residual(y - y0, x - x0);
          want.at(0, y, x) = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
        }
    }
  EXPECT_EQ(got, want);
}

TEST(Degrade, GrayBankBroadcastsOverRgb) {
  std::mt19937 gen(2);
  const Image hr = testutil::random_image(gen, 128, 128, 3);
  Rng rng(4);
  const Image lr = degrade_image(hr, split_bank(), 4, rng);
  const Image down = bicubic_resize(hr, ResampleSpec::downscale(4));
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(lr.at(c, 5, 2), to_u8(down.at(c, 5, 2) + 3.0));
    EXPECT_EQ(lr.at(c, 5, 20), to_u8(down.at(c, 5, 20) - 3.0));
  }
}

TEST(Degrade, Errors) {
  const Image hr(64, 64, 1);
  Rng rng(0);
  EXPECT_EQ(code_of([&] { degrade_image(hr, NoiseBank{}, 4, rng); }), Errc::empty_bank);
  NoiseBank rgb = zero_bank();
  rgb.tiles[0].channels = 3;
  rgb.tiles[0].residual = PlaneD::Zero(96, 32);
  EXPECT_EQ(code_of([&] { add_noise_tiles(hr, rgb, rng); }), Errc::shape_mismatch);
}

TEST(BuildCorpus, DimensionsDeterminismAndSummary) {
  std::mt19937 gen(77);
  TempDir hr_dir("hr"), out_a("oa"), out_b("ob");
  const int sizes[4][2] = {{256, 256}, {130, 97}, {200, 300}, {64, 64}};
  for (int i = 0; i < 4; ++i) {
    save_png(testutil::random_image(gen, sizes[i][0], sizes[i][1], i % 2 ? 3 : 1),
             hr_dir / ("img" + std::to_string(i) + ".png"));
  }
  const NoiseBank bank = extract_noise_patches(mixed_sources(), 20.0, 32, 32);
  const CorpusSummary a = build_synthetic_corpus(hr_dir.path(), out_a.path(), bank, 4, 31);
  const CorpusSummary b = build_synthetic_corpus(hr_dir.path(), out_b.path(), bank, 4, 31);
  ASSERT_EQ(a.images.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    const std::string name = "img" + std::to_string(i) + ".png";
    const Image lr = load_png(out_a / name);
    EXPECT_EQ(lr.width(), sizes[i][0] / 4);
    EXPECT_EQ(lr.height(), sizes[i][1] / 4);
    EXPECT_EQ(testutil::read_file(out_a / name), testutil::read_file(out_b / name));
    EXPECT_EQ(a.images[i].seed, derive_seed(31, i));
  }
  EXPECT_EQ(testutil::read_file(out_a / kCorpusSummaryFile),
            testutil::read_file(out_b / kCorpusSummaryFile));
  const auto j = nlohmann::json::parse(testutil::read_file(out_a / kCorpusSummaryFile));
  EXPECT_EQ(j["noise_bank"]["tiles"], bank.size());
  EXPECT_EQ(j["seed"], 31);

  TempDir empty("empty");
  EXPECT_EQ(code_of([&] { build_synthetic_corpus(empty.path(), out_a.path(), bank, 4, 1); }),
            Errc::empty_corpus);
}

TEST(BuildCorpus, NoiseShiftsVarianceHistogram) {
  // Flat content stays flat under plain downsampling; the bank noise lifts it.
  const SyntheticCorpus syn = make_synthetic_corpus(SyntheticCorpusSpec{});
  const NoiseBank bank = extract_noise_patches(syn.noise_source, 20.0, 32, 32);
  const auto degraded = degrade_images(syn.hr, bank, 4, 9);
  std::vector<NamedImage> clean;
  for (const auto& n : syn.hr) {
    clean.push_back({n.id, bicubic_resize(n.image, ResampleSpec::downscale(4))});
  }
  auto low_fraction = [](const std::vector<NamedImage>& imgs) {
    std::size_t low = 0, total = 0;
    for (const auto& n : imgs) {
      const IntegralTable t = build_integral(to_luminance(n.image));
      for (const auto p : window_grid(t.width(), t.height(), 8, 8)) {
        low += patch_stats(t, p.x, p.y, 8, 8).variance < 4.0;
        ++total;
      }
    }
    return static_cast<double>(low) / static_cast<double>(total);
  };
  EXPECT_GT(low_fraction(clean), 0.2);
  EXPECT_LT(low_fraction(degraded), 0.5 * low_fraction(clean));
}

TEST(Synthetic, Reproducible) {
  SceneSpec spec;
  spec.channels = 3;
  EXPECT_EQ(make_synthetic_scene(spec, 5), make_synthetic_scene(spec, 5));
  EXPECT_FALSE(make_synthetic_scene(spec, 5) == make_synthetic_scene(spec, 6));
  const SyntheticCorpus a = make_synthetic_corpus(SyntheticCorpusSpec{});
  const SyntheticCorpus b = make_synthetic_corpus(SyntheticCorpusSpec{});
  ASSERT_EQ(a.lr.size(), 4u);
  for (std::size_t i = 0; i < a.lr.size(); ++i) {
    EXPECT_EQ(a.lr[i].image, b.lr[i].image);
    EXPECT_EQ(a.hr[i].image.width(), 256);
    EXPECT_EQ(a.lr[i].image.width(), 128);
  }
}
