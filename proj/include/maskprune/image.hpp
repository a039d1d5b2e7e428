#pragma once

#include <string>
#include <vector>

namespace maskprune {

// H x W grid of coverage intensities in [0,1], row-major with row 0 at the
// top of the image.
struct AlphaMask {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  AlphaMask() = default;
  AlphaMask(int h, int w, double fill = 0.0)
      : height(h), width(w), values(static_cast<size_t>(h) * w, fill) {}

  double at(int row, int col) const { return values[static_cast<size_t>(row) * width + col]; }
  double& at(int row, int col) { return values[static_cast<size_t>(row) * width + col]; }
  size_t pixel_count() const { return values.size(); }
};

// Reads an 8- or 16-bit grayscale PNG, mapping sample values linearly to
// [0,1]. RGB input is rejected unless allow_luma is set, in which case the
// Rec. 709 luma of the pixel is used.
AlphaMask load_mask(const std::string& path, bool allow_luma = false);

// Writes a grayscale PNG (bit_depth 8 or 16), quantizing round-half-up.
void save_mask(const AlphaMask& mask, const std::string& path, int bit_depth = 8);

// Values >= threshold map to 1, the rest to 0.
AlphaMask binarize(const AlphaMask& mask, double threshold);

double sum(const AlphaMask& mask);

}  // namespace maskprune
