#include <functional>
#include <memory>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "varmatch/error.hpp"

namespace varmatch::cli {

namespace {

/// Command-line values that override the config file only when given.
class Overrides {
 public:
  template <typename T, typename Access>
  void add(CLI::App* app, const std::string& flag, Access access, const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *value, help);
    appliers_.push_back([opt, value, access](RunConfig& cfg) {
      if (opt->count() > 0) access(cfg) = *value;
    });
  }

  template <typename Access>
  void add_flag(CLI::App* app, const std::string& flag, Access access, const std::string& help) {
    CLI::Option* opt = app->add_flag(flag, help);
    appliers_.push_back([opt, access](RunConfig& cfg) {
      if (opt->count() > 0) access(cfg) = true;
    });
  }

  void apply(RunConfig& cfg) const {
    for (const auto& f : appliers_) f(cfg);
  }

 private:
  std::vector<std::function<void(RunConfig&)>> appliers_;
};

using Handler = nlohmann::json (*)(const RunConfig&);

struct Subcommand {
  CLI::App* app = nullptr;
  Handler handler = nullptr;
  std::string config_path;
  Overrides overrides;
};

#define VARMATCH_FIELD(expr) [](RunConfig& c) -> auto& { return c.expr; }

void add_sampler_options(Subcommand& sub) {
  auto* a = sub.app;
  auto& o = sub.overrides;
  o.add<double>(a, "--sigma-t-sq", VARMATCH_FIELD(sampler.sigma_t_sq), "variance threshold");
  o.add<double>(a, "--mu-t", VARMATCH_FIELD(sampler.mu_t), "mean threshold (disabled if absent)");
  o.add<int>(a, "--lr-patch", VARMATCH_FIELD(sampler.lr_patch), "LR patch side");
  o.add<int>(a, "--hr-patch", VARMATCH_FIELD(sampler.hr_patch), "HR patch side");
  o.add<int>(a, "--n-lr", VARMATCH_FIELD(sampler.n_lr), "LR candidates per round");
  o.add<int>(a, "--n-hr", VARMATCH_FIELD(sampler.n_hr), "HR candidates per round");
  o.add<int>(a, "--batch-size", VARMATCH_FIELD(sampler.batch_size), "pairs per batch");
  o.add<int>(a, "--max-retries", VARMATCH_FIELD(sampler.max_retries), "redraw rounds");
}

void add_corpus_pair_options(Subcommand& sub) {
  sub.overrides.add<std::string>(sub.app, "--lr", VARMATCH_FIELD(lr_dir), "LR corpus directory");
  sub.overrides.add<std::string>(sub.app, "--hr", VARMATCH_FIELD(hr_dir), "HR corpus directory");
}

Subcommand& make_subcommand(std::vector<std::unique_ptr<Subcommand>>& subs, CLI::App& app,
                            const std::string& name, const std::string& help, Handler handler) {
  auto sub = std::make_unique<Subcommand>();
  sub->app = app.add_subcommand(name, help);
  sub->handler = handler;
  sub->app->add_option("--config", sub->config_path, "JSON config file (flags override it)");
  sub->overrides.add<std::uint64_t>(sub->app, "--seed", VARMATCH_FIELD(sampler.seed), "RNG seed");
  subs.push_back(std::move(sub));
  return *subs.back();
}

nlohmann::json error_json(const Error& e) {
  nlohmann::json j = {{"name", e.name()}, {"message", e.what()}};
  if (const auto* starve = dynamic_cast<const InsufficientPairs*>(&e)) {
    j["achieved"] = starve->achieved();
    j["required"] = starve->required();
    j["rounds"] = starve->rounds();
  }
  return j;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::config_error: return kExitConfigError;
    case Errc::insufficient_pairs: return kExitStarvation;
    default: return kExitDataError;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variance-matched LR/HR patch sampling, degradation and metrics"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Subcommand>> subs;

  {
    auto& s = make_subcommand(subs, app, "stats", "patch variance/mean histograms of a corpus",
                              cmd_stats);
    s.overrides.add<std::string>(s.app, "--corpus", VARMATCH_FIELD(corpus_dir), "PNG directory");
    s.overrides.add<int>(s.app, "--patch", VARMATCH_FIELD(patch), "window side");
    s.overrides.add<int>(s.app, "--stride", VARMATCH_FIELD(stride), "window stride");
  }
  {
    auto& s = make_subcommand(subs, app, "sample", "sample variance-matched pair manifests",
                              cmd_sample);
    add_corpus_pair_options(s);
    add_sampler_options(s);
    s.overrides.add<int>(s.app, "--batches", VARMATCH_FIELD(batches), "number of batches");
    s.overrides.add<std::vector<double>>(s.app, "--sweep", VARMATCH_FIELD(sweep),
                                         "run once per sigma_t_sq value");
    s.overrides.add<std::string>(s.app, "--out", VARMATCH_FIELD(out), "manifest directory");
  }
  {
    auto& s = make_subcommand(subs, app, "degrade", "build a degraded LR corpus from HR images",
                              cmd_degrade);
    s.overrides.add<std::string>(s.app, "--hr", VARMATCH_FIELD(hr_dir), "HR directory");
    s.overrides.add<std::string>(s.app, "--noise-source", VARMATCH_FIELD(noise_source_dir),
                                 "real LR images to harvest noise from");
    s.overrides.add<std::string>(s.app, "--out", VARMATCH_FIELD(out), "output directory");
    s.overrides.add<double>(s.app, "--threshold", VARMATCH_FIELD(noise_threshold),
                            "noise window variance threshold");
    s.overrides.add<int>(s.app, "--scale", VARMATCH_FIELD(sampler.scale), "downscale factor");
    s.overrides.add<int>(s.app, "--noise-patch", VARMATCH_FIELD(noise_patch), "noise tile side");
    s.overrides.add<int>(s.app, "--noise-stride", VARMATCH_FIELD(noise_stride), "scan stride");
  }
  {
    auto& s = make_subcommand(subs, app, "metrics", "PSNR/SSIM of predictions against references",
                              cmd_metrics);
    s.overrides.add<std::string>(s.app, "--pred", VARMATCH_FIELD(pred_dir), "prediction directory");
    s.overrides.add<std::string>(s.app, "--ref", VARMATCH_FIELD(ref_dir), "reference directory");
    s.overrides.add<int>(s.app, "--crop", VARMATCH_FIELD(crop), "border pixels to shave");
    s.overrides.add_flag(s.app, "--psnr-luminance", VARMATCH_FIELD(psnr_luminance),
                         "compute PSNR on luminance instead of all channels");
  }
  {
    auto& s = make_subcommand(subs, app, "bench", "throughput of patch statistics and sampling",
                              cmd_bench);
    add_corpus_pair_options(s);
    add_sampler_options(s);
    s.overrides.add<std::string>(s.app, "--corpus", VARMATCH_FIELD(corpus_dir),
                                 "image source (synthetic when absent)");
    s.overrides.add<int>(s.app, "--warmup", VARMATCH_FIELD(warmup), "warmup iterations");
    s.overrides.add<int>(s.app, "--iterations", VARMATCH_FIELD(iterations), "timed iterations");
    s.overrides.add<int>(s.app, "--patch", VARMATCH_FIELD(bench_patch), "patch side");
    s.overrides.add<int>(s.app, "--side", VARMATCH_FIELD(bench_side), "synthetic image side");
  }
  {
    auto& s = make_subcommand(subs, app, "synth", "write the procedural demo corpus", cmd_synth);
    s.overrides.add<std::string>(s.app, "--out", VARMATCH_FIELD(out), "output directory");
    s.overrides.add<int>(s.app, "--scale", VARMATCH_FIELD(sampler.scale), "LR/HR scale factor");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  for (const auto& sub : subs) {
    if (!sub->app->parsed()) continue;
    const std::string name = sub->app->get_name();
    RunConfig cfg;
    nlohmann::json doc = {{"command", name}};
    try {
      if (!sub->config_path.empty()) cfg = RunConfig::load(sub->config_path);
      sub->overrides.apply(cfg);
      doc["config"] = cfg.to_json();
      doc["result"] = sub->handler(cfg);
      out << doc.dump(2) << '\n';
      if (name == "metrics" && !doc["result"]["errors"].empty()) {
        err << "metrics: " << doc["result"]["errors"].size() << " image(s) could not be scored\n";
        return kExitDataError;
      }
      return kExitOk;
    } catch (const Error& e) {
      doc["config"] = cfg.to_json();
      doc["error"] = error_json(e);
      out << doc.dump(2) << '\n';
      err << name << ": " << e.what() << '\n';
      return exit_code_for(e);
    }
  }
  return kExitConfigError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace varmatch::cli
