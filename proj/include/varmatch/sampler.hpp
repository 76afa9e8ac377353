#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "varmatch/corpus.hpp"
#include "varmatch/rng.hpp"

namespace varmatch {

/// Sampling knobs. Defaults: variance threshold 64, LR/HR patch sides 32/128
/// at scale 4, 30 candidates per side.
struct SamplerConfig {
  double sigma_t_sq = 64.0;
  std::optional<double> mu_t;
  int lr_patch = 32;
  int hr_patch = 128;
  int scale = 4;
  int n_lr = 30;
  int n_hr = 30;
  int batch_size = 16;
  int max_retries = 8;
  std::uint64_t seed = 0;

  /// Throws config-error unless sigma_t_sq > 0, mu_t > 0 when set, sides and
  /// scale >= 1, n_lr >= batch_size >= 1, n_hr >= 1 and max_retries >= 0.
  /// A zero threshold admits no pair; sample_batch tolerates it and starves.
  void validate(bool allow_zero_threshold = false) const;
};

struct PatchRef {
  std::string image_id;
  int x = 0;
  int y = 0;
  int size = 0;
  double mean = 0.0;
  double variance = 0.0;

  /// Same rectangle of the same image.
  bool same_location(const PatchRef& other) const noexcept {
    return x == other.x && y == other.y && size == other.size && image_id == other.image_id;
  }
};

struct PatchPair {
  PatchRef lr;
  PatchRef hr;
};

struct PairBatch {
  std::vector<PatchPair> pairs;
  SamplerConfig config;
  int retries_used = 0;
  /// Candidate pairs evaluated and how many of them satisfied the constraint,
  /// counted on the raw N_LR x N_HR grids of every round.
  std::uint64_t candidate_pairs = 0;
  std::uint64_t admissible_pairs = 0;

  double admissible_fraction() const {
    return candidate_pairs ? static_cast<double>(admissible_pairs) / candidate_pairs : 0.0;
  }
};

/// The matching predicate: |var_lr - var_hr| < sigma_t_sq, and
/// |mean_lr - mean_hr| < mu_t when mu_t is set. Both comparisons are strict.
inline bool admissible(const PatchRef& lr, const PatchRef& hr, double sigma_t_sq,
                       std::optional<double> mu_t) noexcept {
  const double dv = lr.variance - hr.variance;
  if (!((dv < 0 ? -dv : dv) < sigma_t_sq)) return false;
  if (!mu_t) return true;
  const double dm = lr.mean - hr.mean;
  return (dm < 0 ? -dm : dm) < *mu_t;
}

/// n patches of side `size` with top-left corners drawn uniformly (x, then y,
/// per patch; duplicates allowed).
std::vector<PatchRef> extract_candidates(const CorpusEntry& entry, int n, int size, Rng& rng);

struct MatchResult {
  std::vector<std::pair<std::size_t, std::size_t>> indices;  // (lr, hr), selection order
  std::uint64_t admissible = 0;
};

/// Greedy matching without replacement: admissible pairs sorted ascending by
/// variance gap (ties by lr index, then hr index), taken unless either side
/// is already consumed.
MatchResult match_indices(std::span<const PatchRef> lr, std::span<const PatchRef> hr,
                          double sigma_t_sq, std::optional<double> mu_t);

std::vector<PatchPair> match_pairs(std::span<const PatchRef> lr, std::span<const PatchRef> hr,
                                   double sigma_t_sq, std::optional<double> mu_t);

/// One draw round: LR image, HR image, n_lr LR corners, n_hr HR corners, in
/// that order from `rng`.
struct CandidateRound {
  std::size_t lr_image = 0;
  std::size_t hr_image = 0;
  std::vector<PatchRef> lr;
  std::vector<PatchRef> hr;
};

CandidateRound draw_round(const Corpus& lr_corpus, const Corpus& hr_corpus,
                          const SamplerConfig& config, Rng& rng);

/// Pairs lr[i] with hr[i], ignoring statistics; the unconstrained baseline.
std::vector<PatchPair> pair_unconstrained(std::span<const PatchRef> lr,
                                          std::span<const PatchRef> hr);

/// Draws rounds until batch_size pairs accumulate. Pairs from later rounds
/// never reuse a location already in the batch. Throws InsufficientPairs after
/// 1 + max_retries rounds. Accepts sigma_t_sq == 0 (nothing is admissible).
PairBatch sample_batch(const Corpus& lr_corpus, const Corpus& hr_corpus,
                       const SamplerConfig& config, Rng& rng);

/// Batch `index` of a run seeded with config.seed: sample_batch with
/// Rng(derive_seed(config.seed, index)).
PairBatch sample_batch_indexed(const Corpus& lr_corpus, const Corpus& hr_corpus,
                               const SamplerConfig& config, std::uint64_t index);

}  // namespace varmatch
