#include "ptycho/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <vector>

namespace ptycho {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_gray(const std::filesystem::path& path, const RealField& img, int bit_depth) {
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot open " + path.string() + " for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng write error on " + path.string());
  }

  const auto rows = static_cast<png_uint_32>(img.rows());
  const auto cols = static_cast<png_uint_32>(img.cols());
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, cols, rows, bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const double maxval = bit_depth == 16 ? 65535.0 : 255.0;
  const std::size_t bpp = bit_depth == 16 ? 2 : 1;
  std::vector<png_byte> row(cols * bpp);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = std::clamp(img(i, j), 0.0, 1.0);
      const auto s = static_cast<unsigned>(v * maxval + 0.5);
      if (bit_depth == 16) {  // PNG samples are big-endian
        row[2 * j] = static_cast<png_byte>(s >> 8);
        row[2 * j + 1] = static_cast<png_byte>(s & 0xff);
      } else {
        row[j] = static_cast<png_byte>(s);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png_gray16(const std::filesystem::path& path, const RealField& img) {
  write_gray(path, img, 16);
}

void write_png_gray8(const std::filesystem::path& path, const RealField& img) {
  write_gray(path, img, 8);
}

RealField read_png_gray(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open " + path.string());

  png_byte header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
    throw std::runtime_error(path.string() + " is not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng read error on " + path.string());
  }

  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_uint_32 cols = png_get_image_width(png, info);
  const png_uint_32 rows = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (color != PNG_COLOR_TYPE_GRAY || (depth != 8 && depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error(path.string() + ": only 8/16-bit grayscale is supported");
  }

  const std::size_t bpp = depth == 16 ? 2 : 1;
  const double maxval = depth == 16 ? 65535.0 : 255.0;
  std::vector<png_byte> row(cols * bpp);
  RealField img(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    png_read_row(png, row.data(), nullptr);
    for (std::size_t j = 0; j < cols; ++j) {
      const unsigned s = depth == 16
                             ? (static_cast<unsigned>(row[2 * j]) << 8) | row[2 * j + 1]
                             : row[j];
      img(i, j) = s / maxval;
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

}  // namespace ptycho
