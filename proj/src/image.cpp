#include "varmatch/image.hpp"

#include <algorithm>
#include <csetjmp>
#include <cstdio>

#include <png.h>

#include "varmatch/error.hpp"

namespace varmatch {

Image::Image(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0) {
    throw Error(Errc::shape_mismatch, "image dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw Error(Errc::format_error, "image must have 1 or 3 channels");
  }
  data_ = PlaneU8::Constant(static_cast<Eigen::Index>(channels) * height, width, fill);
}

Image Image::from_planes(const std::vector<PlaneU8>& planes) {
  if (planes.empty()) throw Error(Errc::format_error, "no planes given");
  const auto h = static_cast<int>(planes.front().rows());
  const auto w = static_cast<int>(planes.front().cols());
  Image out(w, h, static_cast<int>(planes.size()));
  for (int c = 0; c < out.channels(); ++c) {
    if (planes[c].rows() != h || planes[c].cols() != w) {
      throw Error(Errc::shape_mismatch, "planes differ in size");
    }
    out.plane(c) = planes[c];
  }
  return out;
}

bool operator==(const Image& a, const Image& b) {
  return a.width_ == b.width_ && a.height_ == b.height_ && a.channels_ == b.channels_ &&
         (a.data_ == b.data_).all();
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngMessage {
  std::string text;
};

[[noreturn]] void on_png_error(png_structp png, png_const_charp msg) {
  static_cast<PngMessage*>(png_get_error_ptr(png))->text = msg;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

struct ReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~ReadState() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct WriteState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~WriteState() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

enum class ReadOutcome { ok, rejected, libpng_error };

// Every object with a destructor lives in the caller so that a longjmp out of
// libpng never skips one.
ReadOutcome read_png_rows(std::FILE* file, ReadState& st, PngMessage& msg,
                          std::vector<std::uint8_t>& pixels, std::vector<png_bytep>& rows,
                          int& width, int& height, int& channels) {
  if (setjmp(png_jmpbuf(st.png))) return ReadOutcome::libpng_error;

  png_init_io(st.png, file);
  png_set_sig_bytes(st.png, 8);
  png_read_info(st.png, st.info);

  const auto bit_depth = png_get_bit_depth(st.png, st.info);
  const auto color_type = png_get_color_type(st.png, st.info);
  if (bit_depth == 16) {
    msg.text = "16-bit PNG is not supported";
    return ReadOutcome::rejected;
  }
  switch (color_type) {
    case PNG_COLOR_TYPE_PALETTE:
      if (png_get_valid(st.png, st.info, PNG_INFO_tRNS)) {
        msg.text = "palette PNG with transparency is not supported";
        return ReadOutcome::rejected;
      }
      png_set_palette_to_rgb(st.png);
      channels = 3;
      break;
    case PNG_COLOR_TYPE_GRAY:
      if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(st.png);
      channels = 1;
      break;
    case PNG_COLOR_TYPE_GRAY_ALPHA:
      png_set_strip_alpha(st.png);
      channels = 1;
      break;
    case PNG_COLOR_TYPE_RGB:
      channels = 3;
      break;
    case PNG_COLOR_TYPE_RGB_ALPHA:
      png_set_strip_alpha(st.png);
      channels = 3;
      break;
    default:
      msg.text = "unsupported PNG color type";
      return ReadOutcome::rejected;
  }
  png_set_interlace_handling(st.png);
  png_read_update_info(st.png, st.info);

  width = static_cast<int>(png_get_image_width(st.png, st.info));
  height = static_cast<int>(png_get_image_height(st.png, st.info));
  if (png_get_rowbytes(st.png, st.info) != static_cast<std::size_t>(width) * channels) {
    msg.text = "unexpected decoded row size";
    return ReadOutcome::rejected;
  }
  pixels.resize(static_cast<std::size_t>(width) * height * channels);
  rows.resize(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = pixels.data() + static_cast<std::size_t>(y) * width * channels;
  }
  png_read_image(st.png, rows.data());
  png_read_end(st.png, nullptr);
  return ReadOutcome::ok;
}

bool write_png_rows(std::FILE* file, WriteState& st, const std::vector<png_bytep>& rows,
                    int width, int height, int channels) {
  if (setjmp(png_jmpbuf(st.png))) return false;
  png_init_io(st.png, file);
  png_set_IHDR(st.png, st.info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(st.png, st.info);
  png_write_image(st.png, const_cast<png_bytepp>(rows.data()));
  png_write_end(st.png, nullptr);
  return true;
}

}  // namespace

Image load_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(Errc::io_error, "cannot open " + path.string());

  png_byte header[8];
  if (std::fread(header, 1, sizeof header, file.get()) != sizeof header ||
      png_sig_cmp(header, 0, sizeof header) != 0) {
    throw Error(Errc::format_error, path.string() + " is not a PNG file");
  }

  PngMessage msg;
  ReadState st;
  st.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &msg, on_png_error, on_png_warning);
  if (!st.png) throw Error(Errc::io_error, "png_create_read_struct failed");
  st.info = png_create_info_struct(st.png);
  if (!st.info) throw Error(Errc::io_error, "png_create_info_struct failed");

  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  int width = 0, height = 0, channels = 0;
  switch (read_png_rows(file.get(), st, msg, pixels, rows, width, height, channels)) {
    case ReadOutcome::ok: break;
    case ReadOutcome::rejected:
    case ReadOutcome::libpng_error:
      throw Error(Errc::format_error, path.string() + ": " + msg.text);
  }

  Image out(width, height, channels);
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* row = pixels.data() + static_cast<std::size_t>(y) * width * channels;
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) out.at(c, y, x) = row[x * channels + c];
    }
  }
  return out;
}

void save_png(const Image& image, const std::filesystem::path& path) {
  if (image.empty()) throw Error(Errc::format_error, "cannot save an empty image");
  const int w = image.width(), h = image.height(), ch = image.channels();

  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * h * ch);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) {
    std::uint8_t* row = pixels.data() + static_cast<std::size_t>(y) * w * ch;
    rows[y] = row;
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) row[x * ch + c] = image.at(c, y, x);
    }
  }

  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");

  PngMessage msg;
  WriteState st;
  st.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &msg, on_png_error, on_png_warning);
  if (!st.png) throw Error(Errc::io_error, "png_create_write_struct failed");
  st.info = png_create_info_struct(st.png);
  if (!st.info) throw Error(Errc::io_error, "png_create_info_struct failed");

  if (!write_png_rows(file.get(), st, rows, w, h, ch)) {
    throw Error(Errc::io_error, "writing " + path.string() + ": " + msg.text);
  }
  if (std::fflush(file.get()) != 0) throw Error(Errc::io_error, "flush failed: " + path.string());
}

std::vector<std::filesystem::path> list_png_files(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(Errc::io_error, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  return files;
}

std::vector<NamedImage> load_png_directory(const std::filesystem::path& dir) {
  std::vector<NamedImage> images;
  for (const auto& file : list_png_files(dir)) {
    images.push_back({file.filename().string(), load_png(file)});
  }
  return images;
}

Image to_luminance(const Image& image) {
  if (image.channels() == 1) return image;
  Image out(image.width(), image.height(), 1);
  out.plane(0) = (0.299 * image.plane(0).cast<double>() + 0.587 * image.plane(1).cast<double>() +
                  0.114 * image.plane(2).cast<double>())
                     .unaryExpr([](double v) { return to_u8(v); });
  return out;
}

Image crop_border(const Image& image, int border) {
  if (border == 0) return image;
  if (border < 0 || 2 * border >= image.width() || 2 * border >= image.height()) {
    throw Error(Errc::too_small, "border crop leaves no pixels");
  }
  const int w = image.width() - 2 * border, h = image.height() - 2 * border;
  Image out(w, h, image.channels());
  for (int c = 0; c < image.channels(); ++c) {
    out.plane(c) = image.plane(c).block(border, border, h, w);
  }
  return out;
}

}  // namespace varmatch
