#include "varmatch/corpus.hpp"

#include <algorithm>
#include <limits>

#include "varmatch/error.hpp"

namespace varmatch {

Corpus Corpus::from_images(const std::vector<NamedImage>& images) {
  Corpus corpus;
  corpus.entries_.reserve(images.size());
  for (const auto& named : images) {
    corpus.entries_.push_back({named.id, build_integral(to_luminance(named.image))});
  }
  std::stable_sort(corpus.entries_.begin(), corpus.entries_.end(),
                   [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
  return corpus;
}

Corpus Corpus::load(const std::filesystem::path& dir) {
  const auto files = list_png_files(dir);
  if (files.empty()) throw Error(Errc::empty_corpus, "no PNG files in " + dir.string());
  Corpus corpus;
  corpus.entries_.reserve(files.size());
  for (const auto& file : files) {
    corpus.entries_.push_back(
        {file.filename().string(), build_integral(to_luminance(load_png(file)))});
  }
  return corpus;
}

const CorpusEntry* Corpus::find(const std::string& id) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const CorpusEntry& e, const std::string& key) { return e.id < key; });
  return it != entries_.end() && it->id == id ? &*it : nullptr;
}

int Corpus::min_side() const {
  int side = std::numeric_limits<int>::max();
  for (const auto& e : entries_) side = std::min({side, e.width(), e.height()});
  return entries_.empty() ? 0 : side;
}

}  // namespace varmatch
