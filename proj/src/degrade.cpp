#include "varmatch/degrade.hpp"

#include <algorithm>
#include <fstream>

#include "varmatch/error.hpp"
#include "varmatch/resample.hpp"
#include "varmatch/stats.hpp"

namespace varmatch {

NoiseBank extract_noise_patches(const std::vector<NamedImage>& lr_images, double var_threshold,
                                int patch, int stride) {
  if (stride < 1) throw Error(Errc::config_error, "stride must be >= 1");
  if (patch < 1) throw Error(Errc::config_error, "noise patch side must be >= 1");
  if (lr_images.empty()) throw Error(Errc::empty_corpus, "no noise source images");
  const int channels = lr_images.front().image.channels();
  for (const auto& named : lr_images) {
    if (named.image.width() < patch || named.image.height() < patch) {
      throw Error(Errc::image_too_small, named.id + " is smaller than the noise patch side");
    }
    if (named.image.channels() != channels) {
      throw Error(Errc::format_error, "noise source images mix channel counts");
    }
  }

  NoiseBank bank;
  bank.side = patch;
  bank.var_threshold = var_threshold;
  const double n = static_cast<double>(patch) * patch;
  for (const auto& named : lr_images) {
    const IntegralTable table = build_integral(to_luminance(named.image));
    for (const WindowPos pos : window_grid(table.width(), table.height(), patch, stride)) {
      const PatchStats st = patch_stats(table, pos.x, pos.y, patch, patch);
      if (!(st.variance < var_threshold)) continue;
      NoiseTile tile;
      tile.channels = channels;
      tile.residual.resize(static_cast<Eigen::Index>(channels) * patch, patch);
      for (int c = 0; c < channels; ++c) {
        const PlaneD window = named.image.plane(c).block(pos.y, pos.x, patch, patch).cast<double>();
        tile.residual.middleRows(c * patch, patch) = window - window.sum() / n;
      }
      tile.source = {named.id, pos.x, pos.y, patch, st.mean, st.variance};
      bank.tiles.push_back(std::move(tile));
    }
  }
  if (bank.empty()) {
    throw Error(Errc::empty_bank, "no window has variance below the threshold");
  }
  return bank;
}

Image add_noise_tiles(const Image& base, const NoiseBank& bank, Rng& rng) {
  if (bank.empty()) throw Error(Errc::empty_bank, "noise bank is empty");
  if (bank.channels() != 1 && bank.channels() != base.channels()) {
    throw Error(Errc::shape_mismatch, "noise bank channels do not match the image");
  }
  const int side = bank.side;
  Image out(base.width(), base.height(), base.channels());
  for (int y0 = 0; y0 < base.height(); y0 += side) {
    const int h = std::min(side, base.height() - y0);
    for (int x0 = 0; x0 < base.width(); x0 += side) {
      const int w = std::min(side, base.width() - x0);
      const NoiseTile& tile = bank.tiles[rng.uniform_below(bank.size())];
      for (int c = 0; c < base.channels(); ++c) {
        const int tc = tile.channels == 1 ? 0 : c;
        out.plane(c).block(y0, x0, h, w) =
            (base.plane(c).block(y0, x0, h, w).cast<double>() +
             tile.plane(tc).block(0, 0, h, w))
                .unaryExpr([](double v) { return to_u8(v); });
      }
    }
  }
  return out;
}

Image degrade_image(const Image& hr, const NoiseBank& bank, int scale, Rng& rng) {
  if (bank.empty()) throw Error(Errc::empty_bank, "noise bank is empty");
  if (scale < 1) throw Error(Errc::config_error, "scale must be >= 1");
  return add_noise_tiles(bicubic_resize(hr, ResampleSpec::downscale(scale)), bank, rng);
}

std::vector<NamedImage> degrade_images(const std::vector<NamedImage>& hr, const NoiseBank& bank,
                                       int scale, std::uint64_t seed) {
  std::vector<NamedImage> out;
  out.reserve(hr.size());
  for (std::size_t i = 0; i < hr.size(); ++i) {
    Rng rng(derive_seed(seed, i));
    out.push_back({hr[i].id, degrade_image(hr[i].image, bank, scale, rng)});
  }
  return out;
}

nlohmann::json CorpusSummary::to_json() const {
  nlohmann::json images_json = nlohmann::json::array();
  for (const auto& e : images) {
    images_json.push_back(
        {{"name", e.name}, {"seed", e.seed}, {"width", e.width}, {"height", e.height}});
  }
  return {{"seed", seed},
          {"scale", scale},
          {"seed_derivation", "splitmix64(seed ^ splitmix64(image_index))"},
          {"image_count", images.size()},
          {"noise_bank",
           {{"tiles", bank_tiles},
            {"side", bank_side},
            {"channels", bank_channels},
            {"var_threshold", bank_threshold},
            {"mean_source_variance", bank_mean_source_variance}}},
          {"images", images_json}};
}

CorpusSummary build_synthetic_corpus(const std::filesystem::path& hr_dir,
                                     const std::filesystem::path& out_dir, const NoiseBank& bank,
                                     int scale, std::uint64_t seed) {
  if (bank.empty()) throw Error(Errc::empty_bank, "noise bank is empty");
  const auto hr = load_png_directory(hr_dir);
  if (hr.empty()) throw Error(Errc::empty_corpus, "no PNG files in " + hr_dir.string());
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (!std::filesystem::is_directory(out_dir)) {
    throw Error(Errc::io_error, "cannot create " + out_dir.string());
  }

  CorpusSummary summary;
  summary.seed = seed;
  summary.scale = scale;
  summary.bank_tiles = bank.size();
  summary.bank_side = bank.side;
  summary.bank_channels = bank.channels();
  summary.bank_threshold = bank.var_threshold;
  double var_sum = 0.0;
  for (const auto& t : bank.tiles) var_sum += t.source.variance;
  summary.bank_mean_source_variance = var_sum / static_cast<double>(bank.size());

  const auto lr = degrade_images(hr, bank, scale, seed);
  for (std::size_t i = 0; i < lr.size(); ++i) {
    save_png(lr[i].image, out_dir / lr[i].id);
    summary.images.push_back(
        {lr[i].id, derive_seed(seed, i), lr[i].image.width(), lr[i].image.height()});
  }

  std::ofstream out(out_dir / kCorpusSummaryFile);
  out << summary.to_json().dump(2) << '\n';
  if (!out) throw Error(Errc::io_error, "cannot write corpus summary");
  return summary;
}

}  // namespace varmatch
