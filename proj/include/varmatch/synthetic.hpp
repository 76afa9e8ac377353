#pragma once

#include <cstdint>
#include <vector>

#include "varmatch/image.hpp"

namespace varmatch {

/// Procedural scene: a mosaic of rectangular blocks, each flat (faint noise),
/// a linear ramp, a sinusoidal stripe texture or a uniform-noise texture.
/// Block sides are drawn from [min_block, max_block]. Uses only Rng draws and
/// std::sin, so scenes are reproducible from the seed.
struct SceneSpec {
  int width = 256;
  int height = 256;
  int channels = 1;
  int min_block = 96;
  int max_block = 224;
  double flat_probability = 0.55;
  /// Extra uniform noise of +-amplitude over the whole scene.
  double sensor_noise = 0.0;
};

Image make_synthetic_scene(const SceneSpec& spec, std::uint64_t seed);

/// Unpaired desk-scale corpus. HR scenes are used as-is; LR images are
/// different scenes rendered at scale x LR size (blocks scaled alike) and
/// degraded with a noise bank harvested from the noisy `noise_source` scenes.
struct SyntheticCorpusSpec {
  int images = 4;
  int hr_side = 256;
  int lr_side = 128;
  int scale = 4;
  int channels = 1;
  double noise_threshold = 20.0;
  int noise_patch = 32;
  double sensor_noise = 6.0;
  std::uint64_t seed = 0;
};

struct SyntheticCorpus {
  std::vector<NamedImage> hr;
  std::vector<NamedImage> lr;
  std::vector<NamedImage> noise_source;
};

SyntheticCorpus make_synthetic_corpus(const SyntheticCorpusSpec& spec);

}  // namespace varmatch
