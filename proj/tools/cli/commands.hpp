#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "run_config.hpp"
#include "varmatch/image.hpp"

namespace varmatch::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitDataError = 3,
  kExitStarvation = 4,
};

/// Variance bins: bin 0 holds exactly-zero variance, bin k (1..11) holds
/// [edges[k-1], edges[k]) excluding zero; the last bin is open above.
inline constexpr std::array<double, 12> kVarianceEdges = {0,   1,   4,    16,   36,   64,
                                                          100, 256, 576, 1024, 4096, 16384};
inline constexpr int kVarianceBins = 12;
/// Mean bins: 16 bins of width 16 over [0, 256).
inline constexpr int kMeanBins = 16;

int variance_bin(double variance);
int mean_bin(double mean);

struct WindowScan {
  std::vector<std::string> images;
  std::vector<std::uint64_t> windows_per_image;
  std::array<std::uint64_t, kVarianceBins> variance_counts{};
  std::array<std::uint64_t, kMeanBins> mean_counts{};
  std::vector<double> variances;

  std::uint64_t total() const;
};

/// Scans patch x patch windows on a stride grid over each image's luminance.
/// Images with a side shorter than the stride or the patch contribute no windows.
WindowScan scan_windows(const std::vector<NamedImage>& images, int patch, int stride);

nlohmann::json cmd_stats(const RunConfig& cfg);
nlohmann::json cmd_sample(const RunConfig& cfg);
nlohmann::json cmd_degrade(const RunConfig& cfg);
nlohmann::json cmd_metrics(const RunConfig& cfg);
nlohmann::json cmd_bench(const RunConfig& cfg);
nlohmann::json cmd_synth(const RunConfig& cfg);

/// Full CLI entry point: parses argv, prints one JSON document on `out`
/// ({"command", "config", "result"} or {"command", "config", "error"}) and
/// human-readable diagnostics on `err`. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace varmatch::cli
