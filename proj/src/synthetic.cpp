#include "varmatch/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "varmatch/degrade.hpp"
#include "varmatch/error.hpp"
#include "varmatch/rng.hpp"

namespace varmatch {

namespace {

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform01(); }

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(hi - lo + 1)));
}

void fill_block(PlaneD& canvas, int x0, int y0, int w, int h, Rng& rng, double flat_p) {
  const double level = uniform(rng, 100.0, 156.0);
  const double pick = rng.uniform01();
  auto block = canvas.block(y0, x0, h, w);
  if (pick < flat_p) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) block(y, x) = level + uniform(rng, -2.0, 2.0);
  } else if (pick < flat_p + (1.0 - flat_p) * 0.35) {
    const double range = uniform(rng, -40.0, 40.0);
    const bool horizontal = rng.uniform_below(2) == 0;
    const int len = horizontal ? w : h;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) block(y, x) = level + range * (horizontal ? x : y) / len;
  } else if (pick < flat_p + (1.0 - flat_p) * 0.7) {
    const double amp = uniform(rng, 4.0, 45.0);
    const double period = uniform(rng, 6.0, 24.0);
    const bool horizontal = rng.uniform_below(2) == 0;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        block(y, x) = level + amp * std::sin(2.0 * std::numbers::pi * (horizontal ? x : y) / period);
  } else {
    const double amp = uniform(rng, 4.0, 35.0);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) block(y, x) = level + uniform(rng, -amp, amp);
  }
}

std::string numbered(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%03d.png", prefix, i);
  return buf;
}

}  // namespace

Image make_synthetic_scene(const SceneSpec& spec, std::uint64_t seed) {
  if (spec.min_block < 1 || spec.max_block < spec.min_block) {
    throw Error(Errc::config_error, "invalid block size range");
  }
  Rng rng(seed);
  Image out(spec.width, spec.height, spec.channels);
  std::vector<PlaneD> canvases(spec.channels, PlaneD::Zero(spec.height, spec.width));
  // Channel 0 carries the structure; colour channels are tinted copies.
  PlaneD& base = canvases[0];
  for (int y0 = 0; y0 < spec.height;) {
    const int h = std::min(uniform_int(rng, spec.min_block, spec.max_block), spec.height - y0);
    for (int x0 = 0; x0 < spec.width;) {
      const int w = std::min(uniform_int(rng, spec.min_block, spec.max_block), spec.width - x0);
      fill_block(base, x0, y0, w, h, rng, spec.flat_probability);
      x0 += w;
    }
    y0 += h;
  }
  for (int c = 1; c < spec.channels; ++c) canvases[c] = base * uniform(rng, 0.8, 1.1);
  for (int c = 0; c < spec.channels; ++c) {
    if (spec.sensor_noise > 0.0) {
      for (Eigen::Index i = 0; i < canvases[c].size(); ++i) {
        canvases[c](i) += uniform(rng, -spec.sensor_noise, spec.sensor_noise);
      }
    }
    out.plane(c) = canvases[c].unaryExpr([](double v) { return to_u8(v); });
  }
  return out;
}

SyntheticCorpus make_synthetic_corpus(const SyntheticCorpusSpec& spec) {
  SyntheticCorpus corpus;
  const int lr_render = spec.lr_side * spec.scale;

  SceneSpec hr_scene;
  hr_scene.width = hr_scene.height = spec.hr_side;
  hr_scene.channels = spec.channels;

  // LR scenes keep the HR block sizes, so an LR patch and an HR patch that are
  // scale apart in side cover a similar number of blocks.
  SceneSpec lr_scene = hr_scene;
  lr_scene.width = lr_scene.height = lr_render;

  SceneSpec noisy = hr_scene;
  noisy.width = noisy.height = spec.lr_side;
  noisy.min_block = hr_scene.min_block / 2;
  noisy.max_block = hr_scene.max_block / 2;
  noisy.sensor_noise = spec.sensor_noise;

  std::vector<NamedImage> lr_clean;
  for (int i = 0; i < spec.images; ++i) {
    corpus.hr.push_back({numbered("hr", i), make_synthetic_scene(hr_scene, derive_seed(spec.seed, 3 * i))});
    lr_clean.push_back(
        {numbered("lr", i), make_synthetic_scene(lr_scene, derive_seed(spec.seed, 3 * i + 1))});
    corpus.noise_source.push_back(
        {numbered("noise", i), make_synthetic_scene(noisy, derive_seed(spec.seed, 3 * i + 2))});
  }
  const NoiseBank bank = extract_noise_patches(corpus.noise_source, spec.noise_threshold,
                                               spec.noise_patch, spec.noise_patch);
  corpus.lr = degrade_images(lr_clean, bank, spec.scale, derive_seed(spec.seed, ~0ULL));
  return corpus;
}

}  // namespace varmatch
