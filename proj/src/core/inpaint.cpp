#include "core/inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "core/error.hpp"
#include "core/image_io.hpp"

namespace fddb360 {

namespace {

bool is_front_pixel(const BinaryMask& hole, int col, int row) {
  if (!hole.get(col, row)) return false;
  auto known = [&](int c, int r) {
    return c >= 0 && c < hole.width && r >= 0 && r < hole.height &&
           !hole.get(c, r);
  };
  return known(col, row - 1) || known(col - 1, row) || known(col + 1, row) ||
         known(col, row + 1);
}

// Summed-area table over mask bits for O(1) patch-overlap queries.
struct Integral {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> sums;  // (w+1) x (h+1)

  explicit Integral(const BinaryMask& mask)
      : width(mask.width), height(mask.height),
        sums(static_cast<std::size_t>(width + 1) * (height + 1), 0) {
    for (int r = 0; r < height; ++r) {
      std::int32_t row_sum = 0;
      for (int c = 0; c < width; ++c) {
        row_sum += mask.get(c, r) ? 1 : 0;
        sums[idx(c + 1, r + 1)] = sums[idx(c + 1, r)] + row_sum;
      }
    }
  }

  std::size_t idx(int c, int r) const {
    return static_cast<std::size_t>(r) * (width + 1) + c;
  }

  // Count over [c0,c1] x [r0,r1], inclusive; caller keeps it in bounds.
  std::int32_t box(int c0, int r0, int c1, int r1) const {
    return sums[idx(c1 + 1, r1 + 1)] - sums[idx(c0, r1 + 1)] -
           sums[idx(c1 + 1, r0)] + sums[idx(c0, r0)];
  }
};

struct Gradient {
  double gx = 0.0;
  double gy = 0.0;
};

// Centered differences on the grayscale where both neighbors are known,
// one-sided otherwise.
Gradient gradient_at(const std::vector<double>& gray, const BinaryMask& hole,
                     int col, int row) {
  const int w = hole.width;
  const int h = hole.height;
  auto known = [&](int c, int r) {
    return c >= 0 && c < w && r >= 0 && r < h && !hole.get(c, r);
  };
  auto value = [&](int c, int r) {
    return gray[static_cast<std::size_t>(r) * w + c];
  };
  Gradient g;
  const bool left = known(col - 1, row), right = known(col + 1, row);
  if (left && right) {
    g.gx = (value(col + 1, row) - value(col - 1, row)) / 2.0;
  } else if (right) {
    g.gx = value(col + 1, row) - value(col, row);
  } else if (left) {
    g.gx = value(col, row) - value(col - 1, row);
  }
  const bool up = known(col, row - 1), down = known(col, row + 1);
  if (up && down) {
    g.gy = (value(col, row + 1) - value(col, row - 1)) / 2.0;
  } else if (down) {
    g.gy = value(col, row + 1) - value(col, row);
  } else if (up) {
    g.gy = value(col, row) - value(col, row - 1);
  }
  return g;
}

double data_term(const std::vector<double>& gray, const BinaryMask& hole,
                 int col, int row) {
  // Nearest known neighbor carries the isophote; the front pixel itself is
  // unknown.
  static constexpr int kNeighbors[8][2] = {{0, -1}, {-1, 0}, {1, 0}, {0, 1},
                                           {-1, -1}, {1, -1}, {-1, 1}, {1, 1}};
  int qc = -1, qr = -1;
  for (const auto& d : kNeighbors) {
    const int c = col + d[0], r = row + d[1];
    if (c >= 0 && c < hole.width && r >= 0 && r < hole.height &&
        !hole.get(c, r)) {
      qc = c;
      qr = r;
      break;
    }
  }
  if (qc < 0) return 0.0;
  const Gradient g = gradient_at(gray, hole, qc, qr);

  // Boundary normal from the mask gradient; out-of-image counts as known.
  auto hole_at = [&](int c, int r) {
    return (c >= 0 && c < hole.width && r >= 0 && r < hole.height &&
            hole.get(c, r))
               ? 1.0
               : 0.0;
  };
  double nx = (hole_at(col + 1, row) - hole_at(col - 1, row)) / 2.0;
  double ny = (hole_at(col, row + 1) - hole_at(col, row - 1)) / 2.0;
  const double norm = std::hypot(nx, ny);
  if (norm == 0.0) return 0.0;
  nx /= norm;
  ny /= norm;
  // Isophote = gradient rotated 90 degrees.
  return std::abs(-g.gy * nx + g.gx * ny) / 255.0;
}

double confidence_term(const BinaryMask& hole,
                       const std::vector<double>& confidence, int col, int row,
                       int radius) {
  const int w = hole.width;
  const int h = hole.height;
  double sum = 0.0;
  int area = 0;
  for (int r = std::max(0, row - radius); r <= std::min(h - 1, row + radius);
       ++r) {
    for (int c = std::max(0, col - radius); c <= std::min(w - 1, col + radius);
         ++c) {
      if (!hole.get(c, r)) sum += confidence[static_cast<std::size_t>(r) * w + c];
      ++area;
    }
  }
  return area > 0 ? sum / area : 0.0;
}

std::vector<double> initial_confidence(const BinaryMask& hole) {
  std::vector<double> confidence(hole.bits.size());
  for (std::size_t i = 0; i < hole.bits.size(); ++i) {
    confidence[i] = hole.bits[i] ? 0.0 : 1.0;
  }
  return confidence;
}

void dump_front(const std::string& dir, int iteration, const ImageBuffer& img,
                const BinaryMask& hole) {
  ImageBuffer vis(img.width, img.height, 3);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        vis.at(c, r, ch) = img.at(c, r, img.channels == 3 ? ch : 0);
      }
      if (hole.get(c, r)) {
        vis.at(c, r, 0) = 64;
        vis.at(c, r, 1) = 64;
        vis.at(c, r, 2) = 64;
      }
      if (is_front_pixel(hole, c, r)) {
        vis.at(c, r, 0) = 255;
        vis.at(c, r, 1) = 0;
        vis.at(c, r, 2) = 0;
      }
    }
  }
  char name[64];
  std::snprintf(name, sizeof(name), "/front_%05d.png", iteration);
  write_png(dir + name, vis);
}

// Candidate source centers whose patch is fully in bounds and free of
// original-hole pixels, with their precomputed exclusion overlap.
struct CandidateField {
  int radius = 0;
  int patch_area = 0;
  std::vector<std::int32_t> cols;
  std::vector<std::int32_t> rows;
  std::vector<double> overlap;  // exclusion overlap fraction per candidate
  std::size_t unexcluded = 0;

  CandidateField(const BinaryMask& original_hole, const BinaryMask& exclusion,
                 int r)
      : radius(r), patch_area((2 * r + 1) * (2 * r + 1)) {
    const Integral hole_sums(original_hole);
    const Integral excl_sums(exclusion);
    const int w = original_hole.width;
    const int h = original_hole.height;
    for (int row = r; row < h - r; ++row) {
      for (int col = r; col < w - r; ++col) {
        if (hole_sums.box(col - r, row - r, col + r, row + r) != 0) continue;
        const double frac =
            static_cast<double>(
                excl_sums.box(col - r, row - r, col + r, row + r)) /
            patch_area;
        cols.push_back(col);
        rows.push_back(row);
        overlap.push_back(frac);
        if (frac == 0.0) ++unexcluded;
      }
    }
  }
};

// Pixel offsets of the target patch that are currently known, relative to the
// target center and clipped to the image.
struct TargetContext {
  std::vector<std::int32_t> offsets_col;
  std::vector<std::int32_t> offsets_row;
};

TargetContext target_context(const BinaryMask& hole, int col, int row,
                             int radius) {
  TargetContext ctx;
  for (int dr = -radius; dr <= radius; ++dr) {
    for (int dc = -radius; dc <= radius; ++dc) {
      const int c = col + dc, r = row + dr;
      if (c < 0 || c >= hole.width || r < 0 || r >= hole.height) continue;
      if (hole.get(c, r)) continue;
      ctx.offsets_col.push_back(dc);
      ctx.offsets_row.push_back(dr);
    }
  }
  return ctx;
}

std::int64_t patch_ssd(const ImageBuffer& img, const TargetContext& ctx,
                       int tc, int tr, int sc, int sr, std::int64_t bail) {
  std::int64_t ssd = 0;
  const int ch = img.channels;
  for (std::size_t i = 0; i < ctx.offsets_col.size(); ++i) {
    const int dc = ctx.offsets_col[i];
    const int dr = ctx.offsets_row[i];
    const std::uint8_t* a = &img.data[(static_cast<std::size_t>(tr + dr) * img.width + (tc + dc)) * ch];
    const std::uint8_t* b = &img.data[(static_cast<std::size_t>(sr + dr) * img.width + (sc + dc)) * ch];
    for (int k = 0; k < ch; ++k) {
      const int d = static_cast<int>(a[k]) - static_cast<int>(b[k]);
      ssd += static_cast<std::int64_t>(d) * d;
    }
    if (ssd >= bail) return ssd;
  }
  return ssd;
}

struct Selection {
  SourceMatch match;
  std::size_t admissible_unexcluded = 0;
  std::int64_t best_excluded_ssd = -1;
};

Selection select_source(const ImageBuffer& img, const BinaryMask& hole,
                        const CandidateField& field, int tc, int tr,
                        double penalty_weight, bool track_excluded) {
  if (field.cols.empty()) {
    throw Error(ErrorCode::internal,
                "best_source_patch: no admissible source patch");
  }
  const TargetContext ctx = target_context(hole, tc, tr, field.radius);
  constexpr std::int64_t kNoBail = std::numeric_limits<std::int64_t>::max();
  Selection sel;
  double best_cost = std::numeric_limits<double>::infinity();
  std::int64_t best_excluded = -1;
  for (std::size_t i = 0; i < field.cols.size(); ++i) {
    const int sc = field.cols[i];
    const int sr = field.rows[i];
    const double penalty = penalty_weight * field.overlap[i];
    const bool contender = penalty < best_cost;
    const bool track_this = track_excluded && field.overlap[i] > 0.0;
    if (!contender && !track_this) continue;

    // Early-exit threshold: the SSD value beyond which this candidate can
    // neither win the cost competition nor lower the excluded minimum.  A
    // truncated sum always comes back >= the threshold, so it never updates
    // either result incorrectly.
    std::int64_t bail_cost = kNoBail;
    if (contender) {
      const double headroom = best_cost - penalty;
      if (headroom < static_cast<double>(kNoBail)) {
        bail_cost = static_cast<std::int64_t>(headroom) + 1;
      }
    }
    std::int64_t bail = bail_cost;
    if (track_this) {
      const std::int64_t bail_min = best_excluded >= 0 ? best_excluded : kNoBail;
      bail = contender ? std::max(bail_cost, bail_min) : bail_min;
    }

    const std::int64_t ssd = patch_ssd(img, ctx, tc, tr, sc, sr, bail);
    if (track_this && (best_excluded < 0 || ssd < best_excluded)) {
      best_excluded = ssd;
    }
    const double cost = static_cast<double>(ssd) + penalty;
    if (contender && cost < best_cost) {
      best_cost = cost;
      sel.match = {sc, sr, ssd, field.overlap[i]};
    }
  }
  sel.admissible_unexcluded = field.unexcluded;
  sel.best_excluded_ssd = best_excluded;
  return sel;
}

void check_task(const InpaintTask& task) {
  if (task.image.width != task.hole.width ||
      task.image.height != task.hole.height ||
      task.image.width != task.exclusion.width ||
      task.image.height != task.exclusion.height) {
    throw_invalid("inpaint: image/mask dimension mismatch");
  }
  if (task.patch_radius < 1) throw_invalid("inpaint: patch_radius must be >= 1");
}

}  // namespace

double fill_front_priority(const InpaintTask& task, int col, int row) {
  return fill_front_priority(task, initial_confidence(task.hole), col, row);
}

double fill_confidence(const InpaintTask& task, int col, int row) {
  check_task(task);
  if (!task.image.in_bounds(col, row) || !is_front_pixel(task.hole, col, row)) {
    throw_domain("fill_confidence: pixel is not on the fill front");
  }
  return confidence_term(task.hole, initial_confidence(task.hole), col, row,
                         task.patch_radius);
}

double fill_data_term(const InpaintTask& task, int col, int row) {
  check_task(task);
  if (!task.image.in_bounds(col, row) || !is_front_pixel(task.hole, col, row)) {
    throw_domain("fill_data_term: pixel is not on the fill front");
  }
  return data_term(to_grayscale(task.image), task.hole, col, row);
}

double fill_front_priority(const InpaintTask& task,
                           const std::vector<double>& confidence, int col,
                           int row) {
  check_task(task);
  if (!task.image.in_bounds(col, row) || !is_front_pixel(task.hole, col, row)) {
    throw_domain("fill_front_priority: pixel is not on the fill front");
  }
  const std::vector<double> gray = to_grayscale(task.image);
  const double c = confidence_term(task.hole, confidence, col, row,
                                   task.patch_radius);
  const double d = data_term(gray, task.hole, col, row);
  return c * d;
}

SourceMatch best_source_patch(const InpaintTask& task, int target_col,
                              int target_row, const InpaintOptions& opts) {
  check_task(task);
  const CandidateField field(task.hole, task.exclusion, task.patch_radius);
  const double weight = opts.exclusion_penalty * task.image.channels;
  return select_source(task.image, task.hole, field, target_col, target_row,
                       weight, false)
      .match;
}

namespace {

InpaintResult inpaint_with_radius(const InpaintTask& task,
                                  const InpaintOptions& opts, int radius) {
  InpaintResult result;
  result.image = task.image;
  BinaryMask hole = task.hole;
  const CandidateField field(task.hole, task.exclusion, radius);
  const double weight = opts.exclusion_penalty * task.image.channels;

  std::vector<double> gray = to_grayscale(result.image);
  std::vector<double> confidence = initial_confidence(hole);
  const int w = hole.width;
  const int h = hole.height;

  std::size_t remaining = hole.count();
  int iteration = 0;
  while (remaining > 0) {
    if (!opts.debug_dir.empty()) {
      dump_front(opts.debug_dir, iteration, result.image, hole);
    }
    // Highest-priority front pixel; ties go to the lowest (row, col).
    int best_c = -1, best_r = -1;
    double best_p = -1.0;
    double best_conf = 0.0;
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        if (!is_front_pixel(hole, c, r)) continue;
        const double conf = confidence_term(hole, confidence, c, r, radius);
        const double p = conf * data_term(gray, hole, c, r);
        if (p > best_p) {
          best_p = p;
          best_c = c;
          best_r = r;
          best_conf = conf;
        }
      }
    }
    if (best_c < 0) {
      throw Error(ErrorCode::internal, "inpaint: hole has no fill front");
    }

    Selection sel = select_source(result.image, hole, field, best_c, best_r,
                                  weight, opts.track_excluded_best);
    result.log.push_back(
        {best_c, best_r, sel.match, sel.admissible_unexcluded,
         sel.best_excluded_ssd});

    for (int dr = -radius; dr <= radius; ++dr) {
      for (int dc = -radius; dc <= radius; ++dc) {
        const int tc = best_c + dc, tr = best_r + dr;
        if (tc < 0 || tc >= w || tr < 0 || tr >= h) continue;
        if (!hole.get(tc, tr)) continue;
        const int sc = sel.match.col + dc, sr = sel.match.row + dr;
        for (int ch = 0; ch < result.image.channels; ++ch) {
          result.image.at(tc, tr, ch) = result.image.at(sc, sr, ch);
        }
        hole.set(tc, tr, false);
        const std::size_t i = static_cast<std::size_t>(tr) * w + tc;
        confidence[i] = best_conf;
        double v;
        if (result.image.channels == 3) {
          v = 0.299 * result.image.at(tc, tr, 0) +
              0.587 * result.image.at(tc, tr, 1) +
              0.114 * result.image.at(tc, tr, 2);
        } else {
          v = result.image.at(tc, tr, 0);
        }
        gray[i] = v;
        --remaining;
      }
    }
    ++iteration;
  }
  return result;
}

}  // namespace

InpaintResult inpaint(const InpaintTask& task, const InpaintOptions& opts) {
  check_task(task);
  if (task.hole.count() == 0) return {task.image, {}};

  // Shrink the patch on failure; a radius-1 failure is propagated.
  for (int radius = task.patch_radius; radius >= 1; --radius) {
    try {
      return inpaint_with_radius(task, opts, radius);
    } catch (const Error& e) {
      if (radius == 1 || e.code() != ErrorCode::internal) throw;
    }
  }
  throw Error(ErrorCode::internal, "inpaint: unreachable");
}

ExtendedImage extend_image(const ImageBuffer& img,
                           const std::vector<RectFace>& faces,
                           const ExtendOptions& opts) {
  const int diameter = 2 * opts.patch_radius + 1;
  if (img.width < diameter || img.height < diameter) {
    throw_invalid("extend_image: image smaller than the inpainting patch");
  }
  const int w = img.width;
  const int h = img.height;
  const int gap = static_cast<int>(std::llround(0.4 * w));

  // Canvas: [image | gap | copy of image].
  ImageBuffer canvas(2 * w + gap, h, img.channels);
  BinaryMask hole(canvas.width, h, false);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int ch = 0; ch < img.channels; ++ch) {
        canvas.at(c, r, ch) = img.at(c, r, ch);
        canvas.at(c + w + gap, r, ch) = img.at(c, r, ch);
      }
    }
    for (int c = w; c < w + gap; ++c) hole.set(c, r, true);
  }

  std::vector<RectFace> canvas_faces;
  for (const RectFace& f : faces) {
    canvas_faces.push_back(f);
    canvas_faces.push_back({f.x + w + gap, f.y, f.w, f.h});
  }

  InpaintTask task;
  task.image = std::move(canvas);
  task.hole = std::move(hole);
  task.exclusion =
      mask_union(rect_mask(task.image.width, h, canvas_faces, opts.face_dilation),
                 skin_mask(task.image));
  task.patch_radius = opts.patch_radius;

  InpaintOptions iopts;
  iopts.exclusion_penalty = opts.exclusion_penalty;
  iopts.debug_dir = opts.debug_dir;
  ImageBuffer filled = inpaint(task, iopts).image;

  ExtendedImage out;
  out.original_width = w;
  if (w * 4 >= h * 3) {
    // Wide enough: wrap the right half of the filled gap to the left so the
    // original ends up centered in a 1.4 W frame.
    const int left_piece = gap / 2;            // stays on the right
    const int right_piece = gap - left_piece;  // moves to the left
    ImageBuffer arranged(w + gap, h, img.channels);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < right_piece; ++c) {
        for (int ch = 0; ch < img.channels; ++ch) {
          arranged.at(c, r, ch) = filled.at(w + left_piece + c, r, ch);
        }
      }
      for (int c = 0; c < w; ++c) {
        for (int ch = 0; ch < img.channels; ++ch) {
          arranged.at(right_piece + c, r, ch) = filled.at(c, r, ch);
        }
      }
      for (int c = 0; c < left_piece; ++c) {
        for (int ch = 0; ch < img.channels; ++ch) {
          arranged.at(right_piece + w + c, r, ch) = filled.at(w + c, r, ch);
        }
      }
    }
    out.image = std::move(arranged);
    out.layout = ExtendLayout::rearranged;
    for (const RectFace& f : faces) {
      out.face_rects.push_back({f.x + right_piece, f.y, f.w, f.h});
    }
  } else {
    // Narrower than 3:4: keep the full side-by-side canvas; every face is
    // present in both copies.
    out.image = std::move(filled);
    out.layout = ExtendLayout::side_by_side;
    out.face_rects = std::move(canvas_faces);
  }
  return out;
}

}  // namespace fddb360
