#pragma once

#include <cstdint>
#include <vector>

#include "varmatch/image.hpp"

namespace varmatch {

/// Population mean and variance of a patch, in 8-bit sample units.
struct PatchStats {
  double mean = 0.0;
  double variance = 0.0;
};

/// Zero-padded summed-area tables of samples and squared samples of one plane.
/// Entry (r, c) holds the sum over rows [0, r) and columns [0, c).
class IntegralTable {
 public:
  IntegralTable() = default;

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const Plane<std::int64_t>& sum() const noexcept { return sum_; }
  const Plane<std::int64_t>& sum_sq() const noexcept { return sum_sq_; }

  /// Exact sums over the rectangle [x, x+w) x [y, y+h); no bounds check.
  std::int64_t rect_sum(int x, int y, int w, int h) const noexcept {
    return sum_(y + h, x + w) - sum_(y, x + w) - sum_(y + h, x) + sum_(y, x);
  }
  std::int64_t rect_sum_sq(int x, int y, int w, int h) const noexcept {
    return sum_sq_(y + h, x + w) - sum_sq_(y, x + w) - sum_sq_(y + h, x) + sum_sq_(y, x);
  }

  bool contains(int x, int y, int w, int h) const noexcept {
    return w >= 1 && h >= 1 && x >= 0 && y >= 0 && x <= width_ - w && y <= height_ - h;
  }

 private:
  friend IntegralTable build_integral(const Image& plane);

  int width_ = 0;
  int height_ = 0;
  Plane<std::int64_t> sum_;
  Plane<std::int64_t> sum_sq_;
};

/// Throws overflow-risk when a width x height plane of 8-bit samples could
/// overflow the 64-bit squared-sum accumulator.
void check_integral_capacity(std::int64_t width, std::int64_t height);

IntegralTable build_integral(const Image& plane);

/// O(1) patch statistics from four-corner lookups. The variance numerator
/// n*S2 - S^2 is formed exactly in 128-bit integers before the single division.
PatchStats patch_stats(const IntegralTable& table, int x, int y, int w, int h);

/// Direct summation over the patch pixels; the baseline for benchmarking.
PatchStats naive_patch_stats(const Image& plane, int x, int y, int w, int h);

struct WindowPos {
  int x = 0;
  int y = 0;
};

/// Top-left corners of patch x patch windows on a stride grid, row-major.
std::vector<WindowPos> window_grid(int width, int height, int patch, int stride);

}  // namespace varmatch
