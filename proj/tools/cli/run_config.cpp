#include "run_config.hpp"

#include <fstream>
#include <set>

#include "varmatch/error.hpp"

namespace varmatch::cli {

nlohmann::json RunConfig::to_json() const {
  const SamplerConfig& s = sampler;
  return {
      {"sigma_t_sq", s.sigma_t_sq},
      {"mu_t", s.mu_t ? nlohmann::json(*s.mu_t) : nlohmann::json(nullptr)},
      {"lr_patch", s.lr_patch},
      {"hr_patch", s.hr_patch},
      {"scale", s.scale},
      {"n_lr", s.n_lr},
      {"n_hr", s.n_hr},
      {"batch_size", s.batch_size},
      {"max_retries", s.max_retries},
      {"seed", s.seed},
      {"batches", batches},
      {"sweep", sweep},
      {"lr_dir", lr_dir},
      {"hr_dir", hr_dir},
      {"out", out},
      {"corpus_dir", corpus_dir},
      {"patch", patch},
      {"stride", stride},
      {"noise_source_dir", noise_source_dir},
      {"noise_threshold", noise_threshold},
      {"noise_patch", noise_patch},
      {"noise_stride", noise_stride},
      {"pred_dir", pred_dir},
      {"ref_dir", ref_dir},
      {"crop", crop},
      {"psnr_luminance", psnr_luminance},
      {"warmup", warmup},
      {"iterations", iterations},
      {"bench_patch", bench_patch},
      {"bench_side", bench_side},
  };
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::config_error, "config must be a JSON object");
  RunConfig cfg;
  const nlohmann::json defaults = cfg.to_json();
  std::set<std::string> known;
  for (const auto& [k, v] : defaults.items()) known.insert(k);
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw Error(Errc::config_error, "unknown config key '" + key + "'");
  }

  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::config_error, std::string("bad value for '") + key + "': " + e.what());
    }
  };
  SamplerConfig& s = cfg.sampler;
  get("sigma_t_sq", s.sigma_t_sq);
  if (j.contains("mu_t")) {
    if (j["mu_t"].is_null()) {
      s.mu_t.reset();
    } else {
      double mu = 0.0;
      get("mu_t", mu);
      s.mu_t = mu;
    }
  }
  get("lr_patch", s.lr_patch);
  get("hr_patch", s.hr_patch);
  get("scale", s.scale);
  get("n_lr", s.n_lr);
  get("n_hr", s.n_hr);
  get("batch_size", s.batch_size);
  get("max_retries", s.max_retries);
  get("seed", s.seed);
  get("batches", cfg.batches);
  get("sweep", cfg.sweep);
  get("lr_dir", cfg.lr_dir);
  get("hr_dir", cfg.hr_dir);
  get("out", cfg.out);
  get("corpus_dir", cfg.corpus_dir);
  get("patch", cfg.patch);
  get("stride", cfg.stride);
  get("noise_source_dir", cfg.noise_source_dir);
  get("noise_threshold", cfg.noise_threshold);
  get("noise_patch", cfg.noise_patch);
  get("noise_stride", cfg.noise_stride);
  get("pred_dir", cfg.pred_dir);
  get("ref_dir", cfg.ref_dir);
  get("crop", cfg.crop);
  get("psnr_luminance", cfg.psnr_luminance);
  get("warmup", cfg.warmup);
  get("iterations", cfg.iterations);
  get("bench_patch", cfg.bench_patch);
  get("bench_side", cfg.bench_side);
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::config_error, "cannot read config file " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::config_error, std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace varmatch::cli
