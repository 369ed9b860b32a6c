#include "core/raster.hpp"

#include <algorithm>
#include <cmath>

#include "core/annotations.hpp"
#include "core/error.hpp"

namespace fddb360 {

ImageBuffer::ImageBuffer(int w, int h, int c, std::uint8_t fill)
    : width(w), height(h), channels(c) {
  if (w <= 0 || h <= 0 || (c != 1 && c != 3)) {
    throw_invalid("ImageBuffer: bad dimensions");
  }
  data.assign(static_cast<std::size_t>(w) * h * c, fill);
}

BinaryMask::BinaryMask(int w, int h, bool fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw_invalid("BinaryMask: bad dimensions");
  bits.assign(static_cast<std::size_t>(w) * h, fill ? 1 : 0);
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
}

double bilinear_sample(const ImageBuffer& img, PixelPoint p, int ch) {
  // Shift into pixel-center space: sample at a center reproduces that pixel.
  const double x = p.col - 0.5;
  const double y = p.row - 0.5;
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  auto cl = [](int v, int hi) { return std::clamp(v, 0, hi - 1); };
  const int cx0 = cl(x0, img.width), cx1 = cl(x0 + 1, img.width);
  const int cy0 = cl(y0, img.height), cy1 = cl(y0 + 1, img.height);
  const double v00 = img.at(cx0, cy0, ch);
  const double v10 = img.at(cx1, cy0, ch);
  const double v01 = img.at(cx0, cy1, ch);
  const double v11 = img.at(cx1, cy1, ch);
  return (1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) +
         fy * ((1.0 - fx) * v01 + fx * v11);
}

std::array<double, 3> bilinear_sample_rgb(const ImageBuffer& img, PixelPoint p) {
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int c = 0; c < img.channels; ++c) out[c] = bilinear_sample(img, p, c);
  return out;
}

BinaryMask skin_mask(const ImageBuffer& img) {
  BinaryMask mask(img.width, img.height, false);
  if (img.channels != 3) return mask;
  for (int row = 0; row < img.height; ++row) {
    for (int col = 0; col < img.width; ++col) {
      const int r = img.at(col, row, 0);
      const int g = img.at(col, row, 1);
      const int b = img.at(col, row, 2);
      const int mx = std::max({r, g, b});
      const int mn = std::min({r, g, b});
      const bool skin = r > 95 && g > 40 && b > 20 && (mx - mn) > 15 &&
                        std::abs(r - g) > 15 && r > g && r > b;
      mask.set(col, row, skin);
    }
  }
  return mask;
}

BinaryMask rect_mask(int width, int height, const std::vector<RectFace>& rects,
                     double dilation) {
  BinaryMask mask(width, height, false);
  for (const RectFace& rect : rects) {
    const double x0 = rect.x - dilation;
    const double y0 = rect.y - dilation;
    const double x1 = rect.x + rect.w + dilation;
    const double y1 = rect.y + rect.h + dilation;
    // Loose index bounds; the center test below is the exact criterion.
    const int c0 = std::max(0, static_cast<int>(std::floor(x0)) - 1);
    const int c1 = std::min(width - 1, static_cast<int>(std::ceil(x1)) + 1);
    const int r0 = std::max(0, static_cast<int>(std::floor(y0)) - 1);
    const int r1 = std::min(height - 1, static_cast<int>(std::ceil(y1)) + 1);
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        if (col + 0.5 >= x0 && col + 0.5 < x1 && row + 0.5 >= y0 &&
            row + 0.5 < y1) {
          mask.set(col, row, true);
        }
      }
    }
  }
  return mask;
}

std::vector<double> to_grayscale(const ImageBuffer& img) {
  std::vector<double> gray(static_cast<std::size_t>(img.width) * img.height);
  for (int row = 0; row < img.height; ++row) {
    for (int col = 0; col < img.width; ++col) {
      double v;
      if (img.channels == 3) {
        v = 0.299 * img.at(col, row, 0) + 0.587 * img.at(col, row, 1) +
            0.114 * img.at(col, row, 2);
      } else {
        v = img.at(col, row, 0);
      }
      gray[static_cast<std::size_t>(row) * img.width + col] = v;
    }
  }
  return gray;
}

BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
  if (a.width != b.width || a.height != b.height) {
    throw_invalid("mask_union: dimension mismatch");
  }
  BinaryMask out = a;
  for (std::size_t i = 0; i < out.bits.size(); ++i) {
    out.bits[i] = out.bits[i] | b.bits[i];
  }
  return out;
}

}  // namespace fddb360
