#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "varmatch/image.hpp"
#include "varmatch/stats.hpp"

namespace varmatch {

struct CorpusEntry {
  std::string id;
  IntegralTable table;  // luminance plane

  int width() const noexcept { return table.width(); }
  int height() const noexcept { return table.height(); }
};

/// Read-only set of images reduced to luminance integral tables, in id order.
/// Shared freely between threads once built.
class Corpus {
 public:
  Corpus() = default;

  static Corpus from_images(const std::vector<NamedImage>& images);
  /// Loads every PNG in `dir`; throws empty-corpus when there are none.
  static Corpus load(const std::filesystem::path& dir);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const CorpusEntry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<CorpusEntry>& entries() const noexcept { return entries_; }

  /// nullptr when no entry has this id.
  const CorpusEntry* find(const std::string& id) const;

  int min_side() const;

 private:
  std::vector<CorpusEntry> entries_;
};

}  // namespace varmatch
