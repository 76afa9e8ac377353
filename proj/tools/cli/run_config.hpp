#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "varmatch/sampler.hpp"

namespace varmatch::cli {

/// Every knob of every subcommand. Loadable from a JSON object (unknown keys
/// are rejected) and echoed back in the same schema, so the echo of a run is
/// a config file that reproduces it.
struct RunConfig {
  SamplerConfig sampler;
  int batches = 1;
  std::vector<double> sweep;  // sigma_t_sq values; empty = single run

  std::string lr_dir;
  std::string hr_dir;
  std::string out;

  std::string corpus_dir;  // stats / bench
  int patch = 32;
  int stride = 32;

  std::string noise_source_dir;  // degrade
  double noise_threshold = 20.0;
  int noise_patch = 32;
  int noise_stride = 32;

  std::string pred_dir;  // metrics
  std::string ref_dir;
  int crop = 0;
  bool psnr_luminance = false;

  int warmup = 1;  // bench
  int iterations = 5;
  int bench_patch = 128;
  int bench_side = 1024;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::filesystem::path& path);
};

}  // namespace varmatch::cli
