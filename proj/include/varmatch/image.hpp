#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace varmatch {

/// Row-major 2-D array; the dense building block for every raster in the library.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using PlaneU8 = Plane<std::uint8_t>;
using PlaneD = Plane<double>;

/// Owned 8-bit planar raster. Channel planes are stacked vertically in a single
/// contiguous (channels*height) x width array, so samples() is the planar
/// buffer in C,H,W order.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, std::uint8_t fill = 0);

  /// Stack equally sized planes (1 or 3 of them).
  static Image from_planes(const std::vector<PlaneU8>& planes);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return width_ == 0; }

  auto plane(int c) { return data_.middleRows(static_cast<Eigen::Index>(c) * height_, height_); }
  auto plane(int c) const {
    return data_.middleRows(static_cast<Eigen::Index>(c) * height_, height_);
  }

  std::uint8_t& at(int c, int y, int x) { return data_(c * height_ + y, x); }
  std::uint8_t at(int c, int y, int x) const { return data_(c * height_ + y, x); }

  const PlaneU8& data() const noexcept { return data_; }
  PlaneU8& data() noexcept { return data_; }

  std::span<const std::uint8_t> samples() const noexcept {
    return {data_.data(), static_cast<std::size_t>(data_.size())};
  }

  friend bool operator==(const Image& a, const Image& b);

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  PlaneU8 data_;
};

struct NamedImage {
  std::string id;
  Image image;
};

Image load_png(const std::filesystem::path& path);
void save_png(const Image& image, const std::filesystem::path& path);

/// Sorted list of *.png files directly inside `dir`.
std::vector<std::filesystem::path> list_png_files(const std::filesystem::path& dir);
/// Loads every PNG in `dir` in filename order; ids are the filenames.
std::vector<NamedImage> load_png_directory(const std::filesystem::path& dir);

/// BT.601 luma, Y = round(0.299 R + 0.587 G + 0.114 B).
Image to_luminance(const Image& image);

/// Crops `border` pixels from each side.
Image crop_border(const Image& image, int border);

/// Rounds half away from zero and clamps to the 8-bit range.
inline std::uint8_t to_u8(double v) {
  const double r = std::round(v);
  return static_cast<std::uint8_t>(r < 0.0 ? 0.0 : (r > 255.0 ? 255.0 : r));
}

}  // namespace varmatch
