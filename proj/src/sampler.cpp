#include "varmatch/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "varmatch/error.hpp"

namespace varmatch {

void SamplerConfig::validate(bool allow_zero_threshold) const {
  auto fail = [](const std::string& msg) { throw Error(Errc::config_error, msg); };
  const bool zero_ok = allow_zero_threshold && sigma_t_sq == 0.0;
  if (!zero_ok && (!(sigma_t_sq > 0.0) || !std::isfinite(sigma_t_sq))) {
    fail("sigma_t_sq must be positive");
  }
  if (mu_t && (!(*mu_t > 0.0) || !std::isfinite(*mu_t))) fail("mu_t must be positive");
  if (lr_patch < 1 || hr_patch < 1) fail("patch sides must be >= 1");
  if (scale < 1) fail("scale must be >= 1");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (n_lr < batch_size) fail("n_lr must be >= batch_size");
  if (n_hr < 1) fail("n_hr must be >= 1");
  if (max_retries < 0) fail("max_retries must be >= 0");
}

std::vector<PatchRef> extract_candidates(const CorpusEntry& entry, int n, int size, Rng& rng) {
  if (n < 1) throw Error(Errc::config_error, "candidate count must be >= 1");
  if (size < 1 || entry.width() < size || entry.height() < size) {
    throw Error(Errc::image_too_small,
                entry.id + " is smaller than the patch side " + std::to_string(size));
  }
  const auto span_x = static_cast<std::uint64_t>(entry.width() - size + 1);
  const auto span_y = static_cast<std::uint64_t>(entry.height() - size + 1);
  std::vector<PatchRef> refs;
  refs.reserve(n);
  for (int i = 0; i < n; ++i) {
    PatchRef ref;
    ref.image_id = entry.id;
    ref.size = size;
    ref.x = static_cast<int>(rng.uniform_below(span_x));
    ref.y = static_cast<int>(rng.uniform_below(span_y));
    const PatchStats st = patch_stats(entry.table, ref.x, ref.y, size, size);
    ref.mean = st.mean;
    ref.variance = st.variance;
    refs.push_back(std::move(ref));
  }
  return refs;
}

MatchResult match_indices(std::span<const PatchRef> lr, std::span<const PatchRef> hr,
                          double sigma_t_sq, std::optional<double> mu_t) {
  struct Candidate {
    double gap;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Candidate> ok;
  for (std::size_t i = 0; i < lr.size(); ++i) {
    for (std::size_t j = 0; j < hr.size(); ++j) {
      if (admissible(lr[i], hr[j], sigma_t_sq, mu_t)) {
        ok.push_back({std::abs(lr[i].variance - hr[j].variance), i, j});
      }
    }
  }
  std::sort(ok.begin(), ok.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.gap, a.i, a.j) < std::tie(b.gap, b.i, b.j);
  });

  MatchResult result;
  result.admissible = ok.size();
  std::vector<bool> lr_used(lr.size()), hr_used(hr.size());
  for (const auto& c : ok) {
    if (lr_used[c.i] || hr_used[c.j]) continue;
    lr_used[c.i] = hr_used[c.j] = true;
    result.indices.emplace_back(c.i, c.j);
  }
  return result;
}

std::vector<PatchPair> match_pairs(std::span<const PatchRef> lr, std::span<const PatchRef> hr,
                                   double sigma_t_sq, std::optional<double> mu_t) {
  const MatchResult m = match_indices(lr, hr, sigma_t_sq, mu_t);
  std::vector<PatchPair> pairs;
  pairs.reserve(m.indices.size());
  for (auto [i, j] : m.indices) pairs.push_back({lr[i], hr[j]});
  return pairs;
}

CandidateRound draw_round(const Corpus& lr_corpus, const Corpus& hr_corpus,
                          const SamplerConfig& config, Rng& rng) {
  if (lr_corpus.empty() || hr_corpus.empty()) {
    throw Error(Errc::empty_corpus, "sampling needs nonempty LR and HR corpora");
  }
  CandidateRound round;
  round.lr_image = static_cast<std::size_t>(rng.uniform_below(lr_corpus.size()));
  round.hr_image = static_cast<std::size_t>(rng.uniform_below(hr_corpus.size()));
  round.lr = extract_candidates(lr_corpus[round.lr_image], config.n_lr, config.lr_patch, rng);
  round.hr = extract_candidates(hr_corpus[round.hr_image], config.n_hr, config.hr_patch, rng);
  return round;
}

std::vector<PatchPair> pair_unconstrained(std::span<const PatchRef> lr,
                                          std::span<const PatchRef> hr) {
  std::vector<PatchPair> pairs;
  const std::size_t n = std::min(lr.size(), hr.size());
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pairs.push_back({lr[i], hr[i]});
  return pairs;
}

namespace {

bool contains_location(const std::vector<PatchRef>& refs, const PatchRef& ref) {
  return std::any_of(refs.begin(), refs.end(),
                     [&](const PatchRef& r) { return r.same_location(ref); });
}

// Keeps the first occurrence of each location not already in `used`.
std::vector<PatchRef> fresh_candidates(const std::vector<PatchRef>& drawn,
                                       const std::vector<PatchRef>& used) {
  std::vector<PatchRef> out;
  out.reserve(drawn.size());
  for (const auto& ref : drawn) {
    if (!contains_location(used, ref) && !contains_location(out, ref)) out.push_back(ref);
  }
  return out;
}

void check_corpus_sides(const Corpus& corpus, int side, const char* which) {
  for (const auto& e : corpus.entries()) {
    if (e.width() < side || e.height() < side) {
      throw Error(Errc::image_too_small, std::string(which) + " image " + e.id +
                                             " is smaller than the patch side " +
                                             std::to_string(side));
    }
  }
}

}  // namespace

PairBatch sample_batch(const Corpus& lr_corpus, const Corpus& hr_corpus,
                       const SamplerConfig& config, Rng& rng) {
  config.validate(/*allow_zero_threshold=*/true);
  if (lr_corpus.empty() || hr_corpus.empty()) {
    throw Error(Errc::empty_corpus, "sampling needs nonempty LR and HR corpora");
  }
  check_corpus_sides(lr_corpus, config.lr_patch, "LR");
  check_corpus_sides(hr_corpus, config.hr_patch, "HR");

  PairBatch batch;
  batch.config = config;
  std::vector<PatchRef> used_lr, used_hr;
  const auto target = static_cast<std::size_t>(config.batch_size);
  const int rounds = config.max_retries + 1;
  for (int round = 0; round < rounds; ++round) {
    const CandidateRound drawn = draw_round(lr_corpus, hr_corpus, config, rng);
    batch.candidate_pairs += drawn.lr.size() * drawn.hr.size();
    batch.admissible_pairs +=
        match_indices(drawn.lr, drawn.hr, config.sigma_t_sq, config.mu_t).admissible;

    const auto lr_pool = fresh_candidates(drawn.lr, used_lr);
    const auto hr_pool = fresh_candidates(drawn.hr, used_hr);
    for (auto& pair : match_pairs(lr_pool, hr_pool, config.sigma_t_sq, config.mu_t)) {
      used_lr.push_back(pair.lr);
      used_hr.push_back(pair.hr);
      batch.pairs.push_back(std::move(pair));
    }
    if (batch.pairs.size() >= target) {
      batch.pairs.resize(target);
      batch.retries_used = round;
      return batch;
    }
  }
  throw InsufficientPairs(batch.pairs.size(), target, rounds);
}

PairBatch sample_batch_indexed(const Corpus& lr_corpus, const Corpus& hr_corpus,
                               const SamplerConfig& config, std::uint64_t index) {
  Rng rng(derive_seed(config.seed, index));
  return sample_batch(lr_corpus, hr_corpus, config, rng);
}

}  // namespace varmatch
