#include <chrono>

#include "commands.hpp"
#include "varmatch/error.hpp"
#include "varmatch/sampler.hpp"
#include "varmatch/stats.hpp"
#include "varmatch/synthetic.hpp"

namespace varmatch::cli {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kPatchesPerIteration = 512;

template <typename Fn>
double seconds(Fn&& fn) {
  const auto start = Clock::now();
  fn();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

nlohmann::json cmd_bench(const RunConfig& cfg) {
  if (cfg.warmup < 0 || cfg.iterations < 1) {
    throw Error(Errc::config_error, "warmup must be >= 0 and iterations >= 1");
  }
  const int patch = cfg.bench_patch;

  Image plane;
  std::string source;
  if (!cfg.corpus_dir.empty()) {
    const auto files = list_png_files(cfg.corpus_dir);
    if (files.empty()) throw Error(Errc::empty_corpus, "no PNG files in " + cfg.corpus_dir);
    plane = to_luminance(load_png(files.front()));
    source = files.front().string();
  } else {
    SceneSpec spec;
    spec.width = spec.height = cfg.bench_side;
    plane = make_synthetic_scene(spec, cfg.sampler.seed);
    source = "synthetic";
  }
  if (plane.width() < patch || plane.height() < patch) {
    throw Error(Errc::image_too_small, "bench image is smaller than the patch");
  }

  IntegralTable table;
  const double build_s = seconds([&] { table = build_integral(plane); });

  Rng rng(cfg.sampler.seed);
  std::vector<WindowPos> positions(kPatchesPerIteration);
  for (auto& p : positions) {
    p.x = static_cast<int>(rng.uniform_below(plane.width() - patch + 1));
    p.y = static_cast<int>(rng.uniform_below(plane.height() - patch + 1));
  }

  volatile double sink = 0.0;
  auto run_naive = [&] {
    for (const auto& p : positions) sink = sink + naive_patch_stats(plane, p.x, p.y, patch, patch).variance;
  };
  auto run_integral = [&] {
    for (const auto& p : positions) sink = sink + patch_stats(table, p.x, p.y, patch, patch).variance;
  };
  for (int i = 0; i < cfg.warmup; ++i) {
    run_naive();
    run_integral();
  }
  double naive_s = 0.0, integral_s = 0.0;
  for (int i = 0; i < cfg.iterations; ++i) {
    naive_s += seconds(run_naive);
    integral_s += seconds(run_integral);
  }
  const double total_patches = static_cast<double>(kPatchesPerIteration) * cfg.iterations;
  const double naive_rate = total_patches / naive_s;
  const double integral_rate = total_patches / std::max(integral_s, 1e-12);

  Corpus lr, hr;
  if (!cfg.lr_dir.empty() && !cfg.hr_dir.empty()) {
    lr = Corpus::load(cfg.lr_dir);
    hr = Corpus::load(cfg.hr_dir);
  } else {
    SyntheticCorpusSpec spec;
    spec.seed = cfg.sampler.seed;
    const auto synthetic = make_synthetic_corpus(spec);
    lr = Corpus::from_images(synthetic.lr);
    hr = Corpus::from_images(synthetic.hr);
  }
  int starved = 0;
  auto run_batches = [&](int count, std::uint64_t offset) {
    for (int i = 0; i < count; ++i) {
      try {
        sample_batch_indexed(lr, hr, cfg.sampler, offset + static_cast<std::uint64_t>(i));
      } catch (const InsufficientPairs&) {
        ++starved;
      }
    }
  };
  const int batch_runs = 20 * cfg.iterations;
  run_batches(cfg.warmup, 1u << 20);
  starved = 0;
  const double batch_s = seconds([&] { run_batches(batch_runs, 0); });

  return {{"source", source},
          {"image", {{"width", plane.width()}, {"height", plane.height()}}},
          {"patch", patch},
          {"warmup", cfg.warmup},
          {"iterations", cfg.iterations},
          {"patches_per_iteration", kPatchesPerIteration},
          {"integral_build_seconds", build_s},
          {"naive_patches_per_sec", naive_rate},
          {"integral_patches_per_sec", integral_rate},
          {"speedup", integral_rate / naive_rate},
          {"batches", batch_runs},
          {"batches_starved", starved},
          {"batches_per_sec", batch_runs / std::max(batch_s, 1e-12)}};
}

}  // namespace varmatch::cli
