#include "varmatch/stats.hpp"

#include <limits>

#include "varmatch/error.hpp"

namespace varmatch {

void check_integral_capacity(std::int64_t width, std::int64_t height) {
  constexpr std::int64_t kMaxSquare = 255 * 255;
  constexpr std::int64_t kMaxSamples = std::numeric_limits<std::int64_t>::max() / kMaxSquare;
  if (width <= 0 || height <= 0 || width > kMaxSamples / height) {
    throw Error(Errc::overflow_risk, "plane too large for exact 64-bit accumulation");
  }
}

IntegralTable build_integral(const Image& plane) {
  if (plane.channels() != 1) {
    throw Error(Errc::multichannel_input, "integral tables need a single-channel plane");
  }
  check_integral_capacity(plane.width(), plane.height());

  const int w = plane.width(), h = plane.height();
  IntegralTable t;
  t.width_ = w;
  t.height_ = h;
  t.sum_ = Plane<std::int64_t>::Zero(h + 1, w + 1);
  t.sum_sq_ = Plane<std::int64_t>::Zero(h + 1, w + 1);
  for (int y = 0; y < h; ++y) {
    std::int64_t row = 0, row_sq = 0;
    for (int x = 0; x < w; ++x) {
      const std::int64_t v = plane.at(0, y, x);
      row += v;
      row_sq += v * v;
      t.sum_(y + 1, x + 1) = t.sum_(y, x + 1) + row;
      t.sum_sq_(y + 1, x + 1) = t.sum_sq_(y, x + 1) + row_sq;
    }
  }
  return t;
}

PatchStats patch_stats(const IntegralTable& table, int x, int y, int w, int h) {
  if (!table.contains(x, y, w, h)) {
    throw Error(Errc::out_of_bounds, "patch rectangle outside the plane");
  }
  const std::int64_t n = static_cast<std::int64_t>(w) * h;
  const std::int64_t s = table.rect_sum(x, y, w, h);
  const std::int64_t s2 = table.rect_sum_sq(x, y, w, h);
  const __int128 numerator = static_cast<__int128>(n) * s2 - static_cast<__int128>(s) * s;
  const double nd = static_cast<double>(n);
  PatchStats st;
  st.mean = static_cast<double>(s) / nd;
  st.variance = numerator > 0 ? static_cast<double>(numerator) / (nd * nd) : 0.0;
  return st;
}

PatchStats naive_patch_stats(const Image& plane, int x, int y, int w, int h) {
  if (x < 0 || y < 0 || w < 1 || h < 1 || x + w > plane.width() || y + h > plane.height()) {
    throw Error(Errc::out_of_bounds, "patch rectangle outside the plane");
  }
  std::int64_t s = 0, s2 = 0;
  for (int r = y; r < y + h; ++r) {
    for (int c = x; c < x + w; ++c) {
      const std::int64_t v = plane.at(0, r, c);
      s += v;
      s2 += v * v;
    }
  }
  const double n = static_cast<double>(w) * h;
  const double mean = static_cast<double>(s) / n;
  const double var = static_cast<double>(s2) / n - mean * mean;
  return {mean, var > 0.0 ? var : 0.0};
}

std::vector<WindowPos> window_grid(int width, int height, int patch, int stride) {
  std::vector<WindowPos> grid;
  if (patch < 1 || stride < 1 || patch > width || patch > height) return grid;
  for (int y = 0; y + patch <= height; y += stride) {
    for (int x = 0; x + patch <= width; x += stride) grid.push_back({x, y});
  }
  return grid;
}

}  // namespace varmatch
