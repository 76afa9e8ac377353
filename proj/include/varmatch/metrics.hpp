#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "varmatch/error.hpp"
#include "varmatch/image.hpp"

namespace varmatch {

inline constexpr double kPeak = 255.0;
inline constexpr double kSsimC1 = (0.01 * kPeak) * (0.01 * kPeak);
inline constexpr double kSsimC2 = (0.03 * kPeak) * (0.03 * kPeak);
inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;

/// 10 log10(255^2 / MSE) over all samples and channels. Identical images give
/// +infinity (check with std::isinf); no finite stand-in is substituted.
double psnr(const Image& a, const Image& b);

inline bool is_infinite_psnr(double db) { return std::isinf(db) && db > 0; }

/// Normalized 1-D Gaussian taps; the SSIM window is their outer product.
Eigen::ArrayXd gaussian_taps(int size = kSsimWindow, double sigma = kSsimSigma);

/// Per-position SSIM over valid (unpadded) window placements.
PlaneD ssim_map(const PlaneD& a, const PlaneD& b);

/// Mean single-scale SSIM on luminance planes: 11x11 Gaussian window,
/// sigma 1.5, C1 = (0.01*255)^2, C2 = (0.03*255)^2, valid windows only.
double ssim(const Image& a, const Image& b);

namespace detail {
template <typename DerivedA, typename DerivedB>
void require_same_shape(const Eigen::DenseBase<DerivedA>& a, const Eigen::DenseBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(Errc::shape_mismatch, "operands differ in shape");
  }
}
}  // namespace detail

/// Mean absolute difference over all elements.
template <typename DerivedA, typename DerivedB>
double l1_distance(const Eigen::DenseBase<DerivedA>& a, const Eigen::DenseBase<DerivedB>& b) {
  detail::require_same_shape(a, b);
  if (a.size() == 0) return 0.0;
  return (a.derived().template cast<double>().array() -
          b.derived().template cast<double>().array())
      .abs()
      .mean();
}

/// Mean squared difference over all elements.
template <typename DerivedA, typename DerivedB>
double l2_distance(const Eigen::DenseBase<DerivedA>& a, const Eigen::DenseBase<DerivedB>& b) {
  detail::require_same_shape(a, b);
  if (a.size() == 0) return 0.0;
  return (a.derived().template cast<double>().array() -
          b.derived().template cast<double>().array())
      .square()
      .mean();
}

inline double l1_distance(const Image& a, const Image& b) {
  if (a.channels() != b.channels()) throw Error(Errc::shape_mismatch, "channel counts differ");
  return l1_distance(a.data(), b.data());
}

struct LossWeights {
  double adv = 0.0;
  double cyc_or_con = 0.0;
  double per = 0.0;
  double fea = 0.0;
};

/// Component values produced by an external trainer.
struct LossComponents {
  double adv = 0.0;
  double cyc_or_con = 0.0;
  double per = 0.0;
  double fea = 0.0;
};

/// Weights of the super-resolution generator (adversarial, cycle, perceptual, feature).
inline constexpr LossWeights kSrGeneratorWeights{0.3, 0.2, 0.5, 20.0};
/// Weights of the degradation generator (adversarial, content, perceptual, feature).
inline constexpr LossWeights kDegradationGeneratorWeights{0.3, 0.5, 0.2, 20.0};

/// Weighted sum of the four components. Throws config-error on negative weights.
double compose_loss(const LossComponents& components, const LossWeights& weights);

}  // namespace varmatch
