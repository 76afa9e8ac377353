#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "varmatch/degrade.hpp"
#include "varmatch/error.hpp"
#include "varmatch/manifest.hpp"
#include "varmatch/metrics.hpp"
#include "varmatch/synthetic.hpp"

namespace varmatch::cli {

namespace {

void require_path(const std::string& value, const char* key) {
  if (value.empty()) throw Error(Errc::config_error, std::string("'") + key + "' is required");
}

std::filesystem::path make_out_dir(const std::string& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (!std::filesystem::is_directory(out)) throw Error(Errc::io_error, "cannot create " + out);
  return out;
}

double nearest_rank(const std::vector<double>& sorted, double q) {
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::string sigma_dir_name(double sigma) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "sigma_%g", sigma);
  return buf;
}

std::string batch_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "batch_%05d.jsonl", index);
  return buf;
}

nlohmann::json psnr_json(double db) {
  return is_infinite_psnr(db) ? nlohmann::json("inf") : nlohmann::json(db);
}

}  // namespace

int variance_bin(double variance) {
  if (variance == 0.0) return 0;
  for (int k = 1; k < kVarianceBins; ++k) {
    if (variance < kVarianceEdges[k]) return k;
  }
  return kVarianceBins - 1;
}

int mean_bin(double mean) { return std::clamp(static_cast<int>(mean / 16.0), 0, kMeanBins - 1); }

std::uint64_t WindowScan::total() const {
  std::uint64_t n = 0;
  for (auto c : windows_per_image) n += c;
  return n;
}

WindowScan scan_windows(const std::vector<NamedImage>& images, int patch, int stride) {
  if (patch < 1 || stride < 1) throw Error(Errc::config_error, "patch and stride must be >= 1");
  WindowScan scan;
  for (const auto& named : images) {
    scan.images.push_back(named.id);
    const Image& img = named.image;
    if (stride > img.width() || stride > img.height()) {
      scan.windows_per_image.push_back(0);
      continue;
    }
    const IntegralTable table = build_integral(to_luminance(img));
    const auto grid = window_grid(table.width(), table.height(), patch, stride);
    for (const auto pos : grid) {
      const PatchStats st = patch_stats(table, pos.x, pos.y, patch, patch);
      ++scan.variance_counts[variance_bin(st.variance)];
      ++scan.mean_counts[mean_bin(st.mean)];
      scan.variances.push_back(st.variance);
    }
    scan.windows_per_image.push_back(grid.size());
  }
  return scan;
}

nlohmann::json cmd_stats(const RunConfig& cfg) {
  require_path(cfg.corpus_dir, "corpus_dir");
  const auto images = load_png_directory(cfg.corpus_dir);
  if (images.empty()) throw Error(Errc::empty_corpus, "no PNG files in " + cfg.corpus_dir);
  WindowScan scan = scan_windows(images, cfg.patch, cfg.stride);
  if (scan.total() == 0) {
    throw Error(Errc::empty_corpus, "no windows: stride or patch exceeds every image side");
  }

  std::sort(scan.variances.begin(), scan.variances.end());
  nlohmann::json quantiles;
  for (const auto& [name, q] : {std::pair{"p0", 0.0}, {"p10", 0.10}, {"p25", 0.25}, {"p50", 0.50},
                                {"p75", 0.75}, {"p90", 0.90}, {"p100", 1.0}}) {
    quantiles[name] = nearest_rank(scan.variances, q);
  }
  nlohmann::json per_image = nlohmann::json::array();
  for (std::size_t i = 0; i < scan.images.size(); ++i) {
    per_image.push_back({{"name", scan.images[i]}, {"windows", scan.windows_per_image[i]}});
  }
  std::vector<double> mean_edges;
  for (int k = 0; k <= kMeanBins; ++k) mean_edges.push_back(16.0 * k);
  return {{"images", per_image},
          {"windows", scan.total()},
          {"variance_histogram",
           {{"edges", kVarianceEdges},
            {"counts", scan.variance_counts},
            {"bins", "counts[0]: variance == 0; counts[k]: edges[k-1] <= v < edges[k], v > 0; "
                     "counts[11]: v >= 4096"}}},
          {"mean_histogram", {{"edges", mean_edges}, {"counts", scan.mean_counts}}},
          {"variance_quantiles", quantiles}};
}

nlohmann::json cmd_sample(const RunConfig& cfg) {
  require_path(cfg.lr_dir, "lr_dir");
  require_path(cfg.hr_dir, "hr_dir");
  require_path(cfg.out, "out");
  cfg.sampler.validate();
  if (cfg.batches < 1) throw Error(Errc::config_error, "batches must be >= 1");
  for (double s : cfg.sweep) {
    if (!(s > 0.0)) throw Error(Errc::config_error, "sweep values must be positive");
  }

  const Corpus lr = Corpus::load(cfg.lr_dir);
  const Corpus hr = Corpus::load(cfg.hr_dir);
  const auto out_root = make_out_dir(cfg.out);

  const std::vector<double> sigmas =
      cfg.sweep.empty() ? std::vector<double>{cfg.sampler.sigma_t_sq} : cfg.sweep;
  nlohmann::json runs = nlohmann::json::array();
  for (double sigma : sigmas) {
    SamplerConfig sc = cfg.sampler;
    sc.sigma_t_sq = sigma;
    const auto dir = cfg.sweep.empty() ? out_root : make_out_dir((out_root / sigma_dir_name(sigma)).string());

    std::uint64_t candidates = 0, admissible_count = 0, pairs = 0;
    int retries_total = 0, retries_max = 0;
    double gap_sum = 0.0;
    nlohmann::json manifests = nlohmann::json::array();
    for (int b = 0; b < cfg.batches; ++b) {
      const PairBatch batch = sample_batch_indexed(lr, hr, sc, static_cast<std::uint64_t>(b));
      const auto path = dir / batch_file_name(b);
      export_manifest(batch, path);
      manifests.push_back(path.string());
      candidates += batch.candidate_pairs;
      admissible_count += batch.admissible_pairs;
      pairs += batch.pairs.size();
      retries_total += batch.retries_used;
      retries_max = std::max(retries_max, batch.retries_used);
      for (const auto& p : batch.pairs) gap_sum += std::abs(p.lr.variance - p.hr.variance);
    }
    runs.push_back({{"sigma_t_sq", sigma},
                    {"batches", cfg.batches},
                    {"pairs", pairs},
                    {"candidate_pairs", candidates},
                    {"admissible_pairs", admissible_count},
                    {"admissible_fraction",
                     candidates ? static_cast<double>(admissible_count) / candidates : 0.0},
                    {"retries_total", retries_total},
                    {"retries_max", retries_max},
                    {"mean_variance_gap", pairs ? gap_sum / static_cast<double>(pairs) : 0.0},
                    {"manifests", manifests}});
  }
  if (cfg.sweep.empty()) return runs.front();
  return {{"sweep", runs}};
}

nlohmann::json cmd_degrade(const RunConfig& cfg) {
  require_path(cfg.hr_dir, "hr_dir");
  require_path(cfg.noise_source_dir, "noise_source_dir");
  require_path(cfg.out, "out");
  if (cfg.sampler.scale < 1) throw Error(Errc::config_error, "scale must be >= 1");
  const auto noise = load_png_directory(cfg.noise_source_dir);
  if (noise.empty()) throw Error(Errc::empty_corpus, "no PNG files in " + cfg.noise_source_dir);
  const NoiseBank bank =
      extract_noise_patches(noise, cfg.noise_threshold, cfg.noise_patch, cfg.noise_stride);
  const CorpusSummary summary =
      build_synthetic_corpus(cfg.hr_dir, cfg.out, bank, cfg.sampler.scale, cfg.sampler.seed);
  return summary.to_json();
}

nlohmann::json cmd_metrics(const RunConfig& cfg) {
  require_path(cfg.pred_dir, "pred_dir");
  require_path(cfg.ref_dir, "ref_dir");
  if (cfg.crop < 0) throw Error(Errc::config_error, "crop must be >= 0");
  std::set<std::string> pred_names, ref_names;
  for (const auto& p : list_png_files(cfg.pred_dir)) pred_names.insert(p.filename().string());
  for (const auto& p : list_png_files(cfg.ref_dir)) ref_names.insert(p.filename().string());
  if (pred_names.empty() && ref_names.empty()) {
    throw Error(Errc::empty_corpus, "no PNG files to compare");
  }
  std::vector<std::string> missing_pred, missing_ref;
  std::set_difference(ref_names.begin(), ref_names.end(), pred_names.begin(), pred_names.end(),
                      std::back_inserter(missing_pred));
  std::set_difference(pred_names.begin(), pred_names.end(), ref_names.begin(), ref_names.end(),
                      std::back_inserter(missing_ref));
  if (!missing_pred.empty() || !missing_ref.empty()) {
    std::string msg = "missing in pred_dir: [";
    for (const auto& n : missing_pred) msg += (msg.back() == '[' ? "" : ", ") + n;
    msg += "]; missing in ref_dir: [";
    for (const auto& n : missing_ref) msg += (msg.back() == '[' ? "" : ", ") + n;
    throw Error(Errc::filename_mismatch, msg + "]");
  }

  nlohmann::json rows = nlohmann::json::array();
  nlohmann::json errors = nlohmann::json::array();
  double psnr_sum = 0.0, ssim_sum = 0.0;
  std::size_t finite = 0, infinite = 0, scored = 0;
  for (const auto& name : ref_names) {
    try {
      Image pred = crop_border(load_png(std::filesystem::path(cfg.pred_dir) / name), cfg.crop);
      Image ref = crop_border(load_png(std::filesystem::path(cfg.ref_dir) / name), cfg.crop);
      if (pred.width() != ref.width() || pred.height() != ref.height() ||
          pred.channels() != ref.channels()) {
        throw Error(Errc::shape_mismatch, "prediction and reference differ in shape");
      }
      const double db =
          cfg.psnr_luminance ? psnr(to_luminance(pred), to_luminance(ref)) : psnr(pred, ref);
      const double s = ssim(pred, ref);
      rows.push_back({{"name", name}, {"psnr", psnr_json(db)}, {"ssim", s}});
      if (is_infinite_psnr(db)) {
        ++infinite;
      } else {
        psnr_sum += db;
        ++finite;
      }
      ssim_sum += s;
      ++scored;
    } catch (const Error& e) {
      errors.push_back({{"name", name}, {"error", e.name()}, {"message", e.what()}});
    }
  }
  return {{"images", rows},
          {"errors", errors},
          {"mean_psnr", finite ? nlohmann::json(psnr_sum / finite) : nlohmann::json(nullptr)},
          {"infinite_psnr_count", infinite},
          {"mean_ssim", scored ? nlohmann::json(ssim_sum / scored) : nlohmann::json(nullptr)}};
}

nlohmann::json cmd_synth(const RunConfig& cfg) {
  require_path(cfg.out, "out");
  SyntheticCorpusSpec spec;
  spec.seed = cfg.sampler.seed;
  spec.scale = cfg.sampler.scale;
  spec.noise_patch = cfg.noise_patch;
  spec.noise_threshold = cfg.noise_threshold;
  const SyntheticCorpus corpus = make_synthetic_corpus(spec);
  const auto root = make_out_dir(cfg.out);
  nlohmann::json written;
  for (const auto& [sub, images] : {std::pair{"hr", &corpus.hr}, {"lr", &corpus.lr},
                                    {"noise", &corpus.noise_source}}) {
    const auto dir = make_out_dir((root / sub).string());
    for (const auto& named : *images) save_png(named.image, dir / named.id);
    written[sub] = {{"dir", dir.string()}, {"images", images->size()}};
  }
  return written;
}

}  // namespace varmatch::cli
