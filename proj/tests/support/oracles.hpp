#pragma once

// Reference implementations used only by the tests. They are written from the
// definitions, deliberately slow, and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

/// Row-major grayscale raster.
struct Gray {
  int width = 0;
  int height = 0;
  std::vector<int> px;
  int at(int x, int y) const { return px[static_cast<std::size_t>(y) * width + x]; }
};

/// Sum over rows [0, r) and columns [0, c) by direct summation.
inline long long prefix_sum(const Gray& g, int r, int c, bool squared) {
  long long s = 0;
  for (int y = 0; y < r; ++y)
    for (int x = 0; x < c; ++x) s += squared ? 1LL * g.at(x, y) * g.at(x, y) : g.at(x, y);
  return s;
}

/// Two-pass population mean and variance in long double.
inline std::pair<long double, long double> two_pass_stats(const Gray& g, int x0, int y0, int w,
                                                          int h) {
  long double sum = 0;
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) sum += g.at(x, y);
  const long double n = static_cast<long double>(w) * h;
  const long double mean = sum / n;
  long double ss = 0;
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) {
      const long double d = g.at(x, y) - mean;
      ss += d * d;
    }
  return {mean, ss / n};
}

/// Keys cubic convolution kernel, piecewise form.
inline double keys(double t, double a) {
  t = std::fabs(t);
  if (t <= 1.0) return (a + 2) * t * t * t - (a + 3) * t * t + 1;
  if (t < 2.0) return a * t * t * t - 5 * a * t * t + 8 * a * t - 4 * a;
  return 0.0;
}

/// One-dimensional center-aligned cubic resize of a row, clamp-to-edge, unrounded.
inline std::vector<double> resize_row(const std::vector<double>& in, int out_size, double scale,
                                      double a) {
  const int n = static_cast<int>(in.size());
  std::vector<double> out(out_size);
  for (int i = 0; i < out_size; ++i) {
    const double src = (i + 0.5) / scale - 0.5;
    const int base = static_cast<int>(std::floor(src));
    double acc = 0.0;
    for (int k = base - 1; k <= base + 2; ++k) {
      const int idx = std::clamp(k, 0, n - 1);
      acc += keys(src - k, a) * in[idx];
    }
    out[i] = acc;
  }
  return out;
}

/// Two-dimensional cubic resize: rows first, then columns.
inline std::vector<double> resize(const Gray& g, int out_w, int out_h, double scale, double a) {
  std::vector<std::vector<double>> rows(g.height);
  for (int y = 0; y < g.height; ++y) {
    std::vector<double> row(g.width);
    for (int x = 0; x < g.width; ++x) row[x] = g.at(x, y);
    rows[y] = resize_row(row, out_w, scale, a);
  }
  std::vector<double> out(static_cast<std::size_t>(out_w) * out_h);
  for (int x = 0; x < out_w; ++x) {
    std::vector<double> col(g.height);
    for (int y = 0; y < g.height; ++y) col[y] = rows[y][x];
    const auto r = resize_row(col, out_h, scale, a);
    for (int y = 0; y < out_h; ++y) out[static_cast<std::size_t>(y) * out_w + x] = r[y];
  }
  return out;
}

struct Stat {
  double mean = 0.0;
  double variance = 0.0;
};

/// Greedy replay: repeatedly take the admissible unconsumed pair with the
/// smallest (gap, i, j) until none is left.
inline std::vector<std::pair<std::size_t, std::size_t>> greedy_replay(
    const std::vector<Stat>& lr, const std::vector<Stat>& hr, double sigma,
    std::optional<double> mu) {
  std::vector<bool> lr_used(lr.size()), hr_used(hr.size());
  std::vector<std::pair<std::size_t, std::size_t>> out;
  while (true) {
    bool found = false;
    double best_gap = 0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < lr.size(); ++i) {
      if (lr_used[i]) continue;
      for (std::size_t j = 0; j < hr.size(); ++j) {
        if (hr_used[j]) continue;
        const double gap = std::fabs(lr[i].variance - hr[j].variance);
        if (!(gap < sigma)) continue;
        if (mu && !(std::fabs(lr[i].mean - hr[j].mean) < *mu)) continue;
        if (!found || gap < best_gap) {
          found = true;
          best_gap = gap;
          bi = i;
          bj = j;
        }
      }
    }
    if (!found) return out;
    lr_used[bi] = hr_used[bj] = true;
    out.emplace_back(bi, bj);
  }
}

/// Direct 2-D SSIM: Gaussian window built from exp(-(x^2+y^2)/2s^2) and
/// normalized by its sum, two-pass weighted covariance, valid placements only.
inline double ssim(const std::vector<double>& a, const std::vector<double>& b, int w, int h) {
  const int size = 11;
  const double sigma = 1.5;
  const double c1 = (0.01 * 255) * (0.01 * 255);
  const double c2 = (0.03 * 255) * (0.03 * 255);
  std::vector<double> win(size * size);
  double total = 0;
  for (int dy = 0; dy < size; ++dy)
    for (int dx = 0; dx < size; ++dx) {
      const double x = dx - size / 2, y = dy - size / 2;
      win[dy * size + dx] = std::exp(-(x * x + y * y) / (2 * sigma * sigma));
      total += win[dy * size + dx];
    }
  for (auto& v : win) v /= total;

  double acc = 0;
  int count = 0;
  for (int y0 = 0; y0 + size <= h; ++y0)
    for (int x0 = 0; x0 + size <= w; ++x0) {
      double ma = 0, mb = 0;
      for (int dy = 0; dy < size; ++dy)
        for (int dx = 0; dx < size; ++dx) {
          const double k = win[dy * size + dx];
          const std::size_t p = static_cast<std::size_t>(y0 + dy) * w + (x0 + dx);
          ma += k * a[p];
          mb += k * b[p];
        }
      double va = 0, vb = 0, cov = 0;
      for (int dy = 0; dy < size; ++dy)
        for (int dx = 0; dx < size; ++dx) {
          const double k = win[dy * size + dx];
          const std::size_t p = static_cast<std::size_t>(y0 + dy) * w + (x0 + dx);
          va += k * (a[p] - ma) * (a[p] - ma);
          vb += k * (b[p] - mb) * (b[p] - mb);
          cov += k * (a[p] - ma) * (b[p] - mb);
        }
      acc += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  return acc / count;
}

/// Windows on a stride grid whose two-pass variance is below `threshold`.
inline std::vector<std::pair<int, int>> low_variance_windows(const Gray& g, int patch, int stride,
                                                             double threshold) {
  std::vector<std::pair<int, int>> out;
  for (int y = 0; y + patch <= g.height; y += stride)
    for (int x = 0; x + patch <= g.width; x += stride)
      if (two_pass_stats(g, x, y, patch, patch).second < threshold) out.emplace_back(x, y);
  return out;
}

/// BT.601 luma with round half away from zero.
inline int luma(int r, int g, int b) {
  return static_cast<int>(std::round(0.299 * r + 0.587 * g + 0.114 * b));
}

}  // namespace oracle
