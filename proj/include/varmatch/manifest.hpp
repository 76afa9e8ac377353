#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varmatch/corpus.hpp"
#include "varmatch/sampler.hpp"

namespace varmatch {

/// One JSON object per line with keys lr_image, lr_x, lr_y, lr_size, lr_mean,
/// lr_var, hr_image, hr_x, hr_y, hr_size, hr_mean, hr_var. Floats are printed
/// with 17 significant digits so they parse back to the same double.
std::string format_manifest_line(const PatchPair& pair);
PatchPair parse_manifest_line(const std::string& line);

void write_manifest(std::ostream& out, std::span<const PatchPair> pairs);
void export_manifest(const PairBatch& batch, const std::filesystem::path& path);
std::vector<PatchPair> load_manifest(const std::filesystem::path& path);

struct ManifestCheck {
  std::size_t records = 0;
  std::size_t stats_mismatches = 0;       // recorded mean/var != recomputed
  std::size_t constraint_violations = 0;  // pair fails the matching predicate

  bool ok() const noexcept { return stats_mismatches == 0 && constraint_violations == 0; }
};

/// Recomputes every record's statistics from the named corpus images and
/// rechecks the matching predicate. Throws image-not-found for unknown ids and
/// out-of-bounds for rectangles outside their image.
ManifestCheck verify_manifest(std::span<const PatchPair> pairs, const Corpus& lr_corpus,
                              const Corpus& hr_corpus, double sigma_t_sq,
                              std::optional<double> mu_t);

}  // namespace varmatch
