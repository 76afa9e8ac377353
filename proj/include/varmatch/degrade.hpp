#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "varmatch/image.hpp"
#include "varmatch/rng.hpp"
#include "varmatch/sampler.hpp"

namespace varmatch {

/// Zero-mean residual harvested from one low-variance window.
struct NoiseTile {
  int channels = 1;
  PlaneD residual;  // (channels * side) x side, planes stacked like Image
  PatchRef source;  // luminance statistics of the source window

  auto plane(int c) const { return residual.middleRows(c * residual.cols(), residual.cols()); }
};

struct NoiseBank {
  int side = 32;
  double var_threshold = 0.0;
  std::vector<NoiseTile> tiles;

  bool empty() const noexcept { return tiles.empty(); }
  std::size_t size() const noexcept { return tiles.size(); }
  int channels() const noexcept { return tiles.empty() ? 0 : tiles.front().channels; }
};

/// Scans each image on a stride grid (images in the given order, windows
/// row-major). Windows whose luminance variance is below `var_threshold`
/// contribute (window - per-channel window mean). All images must share a
/// channel count. Throws empty-bank when nothing qualifies.
NoiseBank extract_noise_patches(const std::vector<NamedImage>& lr_images, double var_threshold,
                                int patch = 32, int stride = 32);

/// Adds one randomly chosen bank tile per side x side grid cell of `base`
/// (cells row-major, one uniform_below draw each, edge cells cropped), then
/// rounds and clamps. A single-channel bank is broadcast over RGB images.
Image add_noise_tiles(const Image& base, const NoiseBank& bank, Rng& rng);

/// bicubic 1/scale downsample followed by add_noise_tiles.
Image degrade_image(const Image& hr, const NoiseBank& bank, int scale, Rng& rng);

/// Degrades image i with Rng(derive_seed(seed, i)).
std::vector<NamedImage> degrade_images(const std::vector<NamedImage>& hr, const NoiseBank& bank,
                                       int scale, std::uint64_t seed);

struct CorpusSummary {
  std::uint64_t seed = 0;
  int scale = 4;
  struct Entry {
    std::string name;
    std::uint64_t seed = 0;
    int width = 0;
    int height = 0;
  };
  std::vector<Entry> images;
  std::size_t bank_tiles = 0;
  int bank_side = 0;
  int bank_channels = 0;
  double bank_threshold = 0.0;
  double bank_mean_source_variance = 0.0;

  nlohmann::json to_json() const;
};

inline constexpr const char* kCorpusSummaryFile = "corpus_summary.json";

/// Writes degraded LR PNGs under the HR filenames into out_dir plus
/// corpus_summary.json.
CorpusSummary build_synthetic_corpus(const std::filesystem::path& hr_dir,
                                     const std::filesystem::path& out_dir, const NoiseBank& bank,
                                     int scale, std::uint64_t seed);

}  // namespace varmatch
