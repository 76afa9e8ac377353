#include "varmatch/resample.hpp"

#include <algorithm>
#include <cmath>

#include "varmatch/error.hpp"

namespace varmatch {

int ResampleSpec::output_size(int input) const {
  return static_cast<int>(static_cast<long long>(input) * numerator / denominator);
}

double keys_kernel(double t, double a) {
  const double x = std::abs(t);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

std::array<double, 4> cubic_weights(double phase, double a) {
  return {keys_kernel(1.0 + phase, a), keys_kernel(phase, a), keys_kernel(1.0 - phase, a),
          keys_kernel(2.0 - phase, a)};
}

namespace {

struct Taps {
  std::vector<std::array<int, 4>> index;
  std::vector<std::array<double, 4>> weight;
};

Taps make_taps(int in_size, int out_size, const ResampleSpec& spec) {
  Taps taps;
  taps.index.resize(out_size);
  taps.weight.resize(out_size);
  const double inv_scale = static_cast<double>(spec.denominator) / spec.numerator;
  for (int i = 0; i < out_size; ++i) {
    const double src = (i + 0.5) * inv_scale - 0.5;
    const double base = std::floor(src);
    taps.weight[i] = cubic_weights(src - base, spec.kernel_a);
    const int b = static_cast<int>(base);
    for (int k = 0; k < 4; ++k) taps.index[i][k] = std::clamp(b - 1 + k, 0, in_size - 1);
  }
  return taps;
}

}  // namespace

std::vector<PlaneD> bicubic_resize_exact(const Image& image, const ResampleSpec& spec) {
  if (spec.numerator <= 0 || spec.denominator <= 0) {
    throw Error(Errc::degenerate_output, "scale numerator and denominator must be positive");
  }
  const int out_w = spec.output_size(image.width());
  const int out_h = spec.output_size(image.height());
  if (out_w < 1 || out_h < 1) {
    throw Error(Errc::degenerate_output, "resized image would have a zero dimension");
  }
  const Taps tx = make_taps(image.width(), out_w, spec);
  const Taps ty = make_taps(image.height(), out_h, spec);

  std::vector<PlaneD> out;
  out.reserve(image.channels());
  PlaneD horizontal(image.height(), out_w);
  for (int c = 0; c < image.channels(); ++c) {
    const PlaneD src = image.plane(c).cast<double>();
    for (int y = 0; y < image.height(); ++y) {
      for (int x = 0; x < out_w; ++x) {
        const auto& idx = tx.index[x];
        const auto& w = tx.weight[x];
        horizontal(y, x) = w[0] * src(y, idx[0]) + w[1] * src(y, idx[1]) +
                           w[2] * src(y, idx[2]) + w[3] * src(y, idx[3]);
      }
    }
    PlaneD result(out_h, out_w);
    for (int y = 0; y < out_h; ++y) {
      const auto& idx = ty.index[y];
      const auto& w = ty.weight[y];
      result.row(y) = w[0] * horizontal.row(idx[0]) + w[1] * horizontal.row(idx[1]) +
                      w[2] * horizontal.row(idx[2]) + w[3] * horizontal.row(idx[3]);
    }
    out.push_back(std::move(result));
  }
  return out;
}

Image bicubic_resize(const Image& image, const ResampleSpec& spec) {
  const auto planes = bicubic_resize_exact(image, spec);
  Image out(static_cast<int>(planes.front().cols()), static_cast<int>(planes.front().rows()),
            image.channels());
  for (int c = 0; c < image.channels(); ++c) {
    out.plane(c) = planes[c].unaryExpr([](double v) { return to_u8(v); });
  }
  return out;
}

}  // namespace varmatch
