#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "core/geometry.hpp"

namespace fddb360 {

struct RectFace;  // annotations.hpp

// Row-major 8-bit raster, 1 (gray) or 3 (RGB) channels.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;

  ImageBuffer() = default;
  ImageBuffer(int w, int h, int c, std::uint8_t fill = 0);

  std::uint8_t at(int col, int row, int ch) const {
    return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
  std::uint8_t& at(int col, int row, int ch) {
    return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
  bool in_bounds(int col, int row) const {
    return col >= 0 && col < width && row >= 0 && row < height;
  }
};

// Per-pixel boolean mask with the same addressing as ImageBuffer.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BinaryMask() = default;
  BinaryMask(int w, int h, bool fill = false);

  bool get(int col, int row) const {
    return bits[static_cast<std::size_t>(row) * width + col] != 0;
  }
  void set(int col, int row, bool v) {
    bits[static_cast<std::size_t>(row) * width + col] = v ? 1 : 0;
  }
  std::size_t count() const;
};

// Bilinear interpolation of the four neighboring pixel centers, one channel.
// Coordinates outside the image clamp to the edge.
double bilinear_sample(const ImageBuffer& img, PixelPoint p, int ch);

// All channels at once.
std::array<double, 3> bilinear_sample_rgb(const ImageBuffer& img, PixelPoint p);

// Rule-based RGB skin classifier; 1-channel input yields an all-false mask.
BinaryMask skin_mask(const ImageBuffer& img);

// True inside each rect expanded by `dilation` on all sides, clipped to the
// image bounds.  A pixel is inside when its center falls in the half-open
// rect [x, x+w) x [y, y+h).
BinaryMask rect_mask(int width, int height, const std::vector<RectFace>& rects,
                     double dilation);

// Luma (0.299 R + 0.587 G + 0.114 B) as a double image; gray passes through.
std::vector<double> to_grayscale(const ImageBuffer& img);

BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b);

}  // namespace fddb360
