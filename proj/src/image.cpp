#include "maskprune/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace maskprune {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

AlphaMask load_mask(const std::string& path, bool allow_luma) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw std::runtime_error("cannot open mask image: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("failed to decode PNG: " + path);
  }

  png_init_io(png, file.get());
  png_read_info(png, info);

  auto width = png_get_image_width(png, info);
  auto height = png_get_image_height(png, info);
  auto color_type = png_get_color_type(png, info);
  auto bit_depth = png_get_bit_depth(png, info);

  bool is_gray = color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA;
  if (!is_gray && !allow_luma) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("mask is not grayscale (pass --luma to accept color): " + path);
  }

  // Normalize everything to 16-bit RGBA-free rows we can scan uniformly.
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  color_type = png_get_color_type(png, info);
  bit_depth = png_get_bit_depth(png, info);
  int channels = png_get_channels(png, info);
  if (bit_depth != 8 && bit_depth != 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("unsupported PNG bit depth: " + std::to_string(bit_depth));
  }

  auto row_bytes = png_get_rowbytes(png, info);
  std::vector<png_byte> data(row_bytes * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 r = 0; r < height; r++) rows[r] = data.data() + r * row_bytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  AlphaMask mask(static_cast<int>(height), static_cast<int>(width));
  auto max_value = bit_depth == 16 ? 65535.0 : 255.0;
  for (png_uint_32 r = 0; r < height; r++) {
    auto* row = rows[r];
    for (png_uint_32 c = 0; c < width; c++) {
      double sample;
      if (channels == 1) {
        sample = bit_depth == 16 ? row[c * 2] * 256.0 + row[c * 2 + 1]
                                 : static_cast<double>(row[c]);
      } else {
        // color input: Rec. 709 luma
        double rgb[3];
        for (int k = 0; k < 3; k++) {
          auto base = (c * channels + k) * (bit_depth / 8);
          rgb[k] = bit_depth == 16 ? row[base] * 256.0 + row[base + 1]
                                   : static_cast<double>(row[base]);
        }
        sample = 0.2126 * rgb[0] + 0.7152 * rgb[1] + 0.0722 * rgb[2];
      }
      mask.at(static_cast<int>(r), static_cast<int>(c)) = sample / max_value;
    }
  }
  return mask;
}

void save_mask(const AlphaMask& mask, const std::string& path, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16)
    throw std::runtime_error("save_mask: bit_depth must be 8 or 16");
  if (mask.height < 1 || mask.width < 1) throw std::runtime_error("save_mask: empty mask");

  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw std::runtime_error("cannot open file for writing: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("failed to encode PNG: " + path);
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, mask.width, mask.height, bit_depth, PNG_COLOR_TYPE_GRAY,
      PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  auto max_value = bit_depth == 16 ? 65535.0 : 255.0;
  auto quantize = [&](double v) {
    auto clamped = std::min(std::max(v, 0.0), 1.0);
    return static_cast<unsigned>(std::floor(clamped * max_value + 0.5));
  };

  std::vector<png_byte> row(static_cast<size_t>(mask.width) * (bit_depth / 8));
  for (int r = 0; r < mask.height; r++) {
    for (int c = 0; c < mask.width; c++) {
      auto q = quantize(mask.at(r, c));
      if (bit_depth == 16) {
        row[c * 2] = static_cast<png_byte>(q >> 8);
        row[c * 2 + 1] = static_cast<png_byte>(q & 0xff);
      } else {
        row[c] = static_cast<png_byte>(q);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) throw std::runtime_error("write failed: " + path);
}

AlphaMask binarize(const AlphaMask& mask, double threshold) {
  AlphaMask out(mask.height, mask.width);
  for (size_t i = 0; i < mask.values.size(); i++)
    out.values[i] = mask.values[i] >= threshold ? 1.0 : 0.0;
  return out;
}

double sum(const AlphaMask& mask) {
  double total = 0;
  for (auto v : mask.values) total += v;
  return total;
}

}  // namespace maskprune
