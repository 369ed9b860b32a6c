#include "core/synth.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/geometry.hpp"

namespace fddb360 {

namespace {

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

std::vector<PatchSpec> plan_patches(const ExtendedImage& ext,
                                    const std::string& source_image_id,
                                    int patch_count) {
  const int width = ext.image.width;
  const int side = ext.image.height;
  if (width < side) {
    throw_domain("plan_patches: extended image narrower than tall, cannot "
                 "place a square patch");
  }
  if (patch_count < 1) throw_invalid("plan_patches: patch_count must be >= 1");
  std::vector<PatchSpec> specs;
  for (int i = 0; i < patch_count; ++i) {
    PatchSpec spec;
    spec.side = side;
    spec.top = 0;
    spec.left = patch_count == 1
                    ? 0
                    : static_cast<int>(std::llround(
                          static_cast<double>(i) * (width - side) /
                          (patch_count - 1)));
    spec.source_image_id = source_image_id;
    spec.patch_index = i;
    specs.push_back(std::move(spec));
  }
  return specs;
}

ImageBuffer render_fisheye(const ExtendedImage& ext, const PatchSpec& spec,
                           const RenderOptions& opts) {
  if (spec.left < 0 || spec.top < 0 ||
      spec.left + spec.side > ext.image.width ||
      spec.top + spec.side > ext.image.height) {
    throw_invalid("render_fisheye: patch outside the extended image");
  }
  const int side = spec.side;
  const double content_radius = max_warp_radius();
  ImageBuffer out(side, side, ext.image.channels);
  for (int row = 0; row < side; ++row) {
    for (int col = 0; col < side; ++col) {
      const NormPoint q =
          pixel_to_norm({col + 0.5, row + 0.5}, static_cast<double>(side));
      const double radius = std::hypot(q.x, q.y);
      if (radius > content_radius) {
        for (int ch = 0; ch < out.channels; ++ch) {
          out.at(col, row, ch) =
              out.channels == 1 ? opts.fill_color[0] : opts.fill_color[ch];
        }
        continue;
      }
      const NormPoint square = disc_to_square(unsqueeze(q));
      const PixelPoint src =
          norm_to_pixel(square, static_cast<double>(side));
      const PixelPoint in_ext{src.col + spec.left, src.row + spec.top};
      for (int ch = 0; ch < out.channels; ++ch) {
        const double v = bilinear_sample(ext.image, in_ext, ch);
        out.at(col, row, ch) =
            static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return out;
}

std::optional<RectFace> map_face(const RectFace& face, const PatchSpec& spec) {
  const double px0 = spec.left;
  const double py0 = spec.top;
  const double px1 = spec.left + spec.side;
  const double py1 = spec.top + spec.side;

  const double ix0 = std::max(face.x, px0);
  const double iy0 = std::max(face.y, py0);
  const double ix1 = std::min(face.x + face.w, px1);
  const double iy1 = std::min(face.y + face.h, py1);
  const double iw = ix1 - ix0;
  const double ih = iy1 - iy0;
  if (iw <= 0.0 || ih <= 0.0) return std::nullopt;

  // Annotation survives only when more than half of the box is visible.
  const double retention = (iw * ih) / face.area();
  if (!(retention > 0.5)) return std::nullopt;

  // Corners and edge midpoints of the trimmed box.
  const double mx = (ix0 + ix1) / 2.0;
  const double my = (iy0 + iy1) / 2.0;
  const PixelPoint points[8] = {
      {ix0, iy0}, {mx, iy0}, {ix1, iy0}, {ix1, my},
      {ix1, iy1}, {mx, iy1}, {ix0, iy1}, {ix0, my},
  };

  const double side = spec.side;
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  for (int i = 0; i < 8; ++i) {
    NormPoint p = pixel_to_norm(
        {points[i].col - spec.left, points[i].row - spec.top}, side);
    p.x = clamp_unit(p.x);
    p.y = clamp_unit(p.y);
    const NormPoint warped = forward_warp(p);
    const PixelPoint out = norm_to_pixel(warped, side);
    if (i == 0) {
      min_x = max_x = out.col;
      min_y = max_y = out.row;
    } else {
      min_x = std::min(min_x, out.col);
      max_x = std::max(max_x, out.col);
      min_y = std::min(min_y, out.row);
      max_y = std::max(max_y, out.row);
    }
  }
  return RectFace{min_x, min_y, max_x - min_x, max_y - min_y};
}

double rect_iou(const RectFace& a, const RectFace& b) {
  const double ix = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double iy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  return inter / (a.area() + b.area() - inter);
}

std::vector<CircularSample> synthesize(const ExtendedImage& ext,
                                       const std::string& source_image_id,
                                       const RenderOptions& opts) {
  const std::vector<PatchSpec> specs =
      plan_patches(ext, source_image_id, opts.patch_count);
  std::vector<CircularSample> samples;
  for (const PatchSpec& spec : specs) {
    CircularSample sample;
    sample.image = render_fisheye(ext, spec, opts);
    sample.source_image_id = source_image_id;
    sample.patch_index = spec.patch_index;
    sample.layout = ext.layout;
    for (const RectFace& face : ext.face_rects) {
      std::optional<RectFace> mapped = map_face(face, spec);
      if (!mapped) continue;
      // The mirrored copy in the side-by-side layout can land the same face
      // in one patch twice; near-identical duplicates are dropped.
      if (ext.layout == ExtendLayout::side_by_side) {
        const bool duplicate =
            std::any_of(sample.faces.begin(), sample.faces.end(),
                        [&](const RectFace& existing) {
                          return rect_iou(existing, *mapped) > 0.9;
                        });
        if (duplicate) continue;
      }
      sample.faces.push_back(*mapped);
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace fddb360
