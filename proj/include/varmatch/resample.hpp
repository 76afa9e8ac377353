#pragma once

#include <array>

#include "varmatch/image.hpp"

namespace varmatch {

/// Rational scale factor plus cubic kernel parameter. Output size along an axis
/// is floor(input * numerator / denominator).
struct ResampleSpec {
  int numerator = 1;
  int denominator = 4;
  double kernel_a = -0.5;

  static ResampleSpec downscale(int factor, double a = -0.5) { return {1, factor, a}; }
  static ResampleSpec upscale(int factor, double a = -0.5) { return {factor, 1, a}; }

  double scale() const { return static_cast<double>(numerator) / denominator; }
  int output_size(int input) const;
};

/// Keys cubic convolution kernel W(t).
double keys_kernel(double t, double a);

/// Weights of the four taps at offsets (-1-phase, -phase, 1-phase, 2-phase)
/// from the interpolated position, for phase in [0, 1).
std::array<double, 4> cubic_weights(double phase, double a);

/// Separable cubic convolution with center-aligned sampling
/// (src = (i + 0.5) / scale - 0.5) and clamp-to-edge borders. Samples are
/// accumulated in double and rounded half away from zero.
Image bicubic_resize(const Image& image, const ResampleSpec& spec);

/// Same as bicubic_resize without the final rounding, one double plane per channel.
std::vector<PlaneD> bicubic_resize_exact(const Image& image, const ResampleSpec& spec);

}  // namespace varmatch
