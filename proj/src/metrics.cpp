#include "varmatch/metrics.hpp"

namespace varmatch {

namespace {

void require_same_image_shape(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels()) {
    throw Error(Errc::shape_mismatch, "images differ in size or channel count");
  }
}

// Valid-mode separable filtering with the same taps along both axes.
PlaneD filter_valid(const PlaneD& src, const Eigen::ArrayXd& taps) {
  const auto k = static_cast<Eigen::Index>(taps.size());
  const Eigen::Index out_w = src.cols() - k + 1;
  const Eigen::Index out_h = src.rows() - k + 1;
  PlaneD horizontal = PlaneD::Zero(src.rows(), out_w);
  for (Eigen::Index i = 0; i < k; ++i) horizontal += taps(i) * src.middleCols(i, out_w);
  PlaneD out = PlaneD::Zero(out_h, out_w);
  for (Eigen::Index i = 0; i < k; ++i) out += taps(i) * horizontal.middleRows(i, out_h);
  return out;
}

}  // namespace

double psnr(const Image& a, const Image& b) {
  require_same_image_shape(a, b);
  const auto diff = a.data().cast<std::int64_t>() - b.data().cast<std::int64_t>();
  const std::int64_t sse = diff.square().sum();
  if (sse == 0) return std::numeric_limits<double>::infinity();
  const double mse = static_cast<double>(sse) / static_cast<double>(a.data().size());
  return 10.0 * std::log10(kPeak * kPeak / mse);
}

Eigen::ArrayXd gaussian_taps(int size, double sigma) {
  Eigen::ArrayXd taps(size);
  const double center = (size - 1) / 2.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - center;
    taps(i) = std::exp(-(d * d) / (2.0 * sigma * sigma));
  }
  return taps / taps.sum();
}

PlaneD ssim_map(const PlaneD& a, const PlaneD& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(Errc::shape_mismatch, "planes differ in size");
  }
  if (a.rows() < kSsimWindow || a.cols() < kSsimWindow) {
    throw Error(Errc::too_small, "SSIM needs at least 11x11 pixels");
  }
  const Eigen::ArrayXd taps = gaussian_taps();
  const PlaneD mu_a = filter_valid(a, taps);
  const PlaneD mu_b = filter_valid(b, taps);
  const PlaneD var_a = filter_valid(a * a, taps) - mu_a * mu_a;
  const PlaneD var_b = filter_valid(b * b, taps) - mu_b * mu_b;
  const PlaneD cov = filter_valid(a * b, taps) - mu_a * mu_b;
  return ((2.0 * mu_a * mu_b + kSsimC1) * (2.0 * cov + kSsimC2)) /
         ((mu_a * mu_a + mu_b * mu_b + kSsimC1) * (var_a + var_b + kSsimC2));
}

double ssim(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(Errc::shape_mismatch, "images differ in size");
  }
  const Image ya = to_luminance(a);
  const Image yb = to_luminance(b);
  return ssim_map(ya.data().cast<double>(), yb.data().cast<double>()).mean();
}

double compose_loss(const LossComponents& c, const LossWeights& w) {
  if (w.adv < 0 || w.cyc_or_con < 0 || w.per < 0 || w.fea < 0) {
    throw Error(Errc::config_error, "loss weights must be nonnegative");
  }
  return w.adv * c.adv + w.cyc_or_con * c.cyc_or_con + w.per * c.per + w.fea * c.fea;
}

}  // namespace varmatch
