#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/annotations.hpp"
#include "core/raster.hpp"

namespace fddb360 {

// Exemplar-based hole filling.  The fill front is processed in priority
// order (confidence times data term); each step copies the best-matching
// source patch into the unknown pixels.  Source patches must lie fully
// inside the original known region; candidates overlapping the exclusion
// mask pay an additive cost penalty so face and skin content is only copied
// when nothing else is admissible.

struct InpaintTask {
  ImageBuffer image;
  BinaryMask hole;       // true = unknown
  BinaryMask exclusion;  // true = forbidden as source content
  int patch_radius = 4;
};

struct InpaintOptions {
  // Per-channel penalty weight; the effective weight is this times the
  // channel count, applied as cost = SSD + weight * overlap_fraction.
  double exclusion_penalty = 1e6;
  // When set, also track the best raw SSD among excluded candidates per step
  // (costs one extra scan per step; used by selection-audit tests).
  bool track_excluded_best = false;
  // When set, write a fill-front visualization PNG per iteration.
  std::string debug_dir;
};

struct SourceMatch {
  int col = 0;
  int row = 0;
  std::int64_t ssd = 0;
  double overlap_fraction = 0.0;
};

struct FillStep {
  int target_col = 0;
  int target_row = 0;
  SourceMatch source;
  std::size_t admissible_unexcluded = 0;  // candidates with zero overlap
  std::int64_t best_excluded_ssd = -1;    // -1 unless track_excluded_best
};

struct InpaintResult {
  ImageBuffer image;
  std::vector<FillStep> log;
};

// Priority P(p) = C(p) * D(p) of a fill-front pixel, with confidence in its
// initial state (1 on known pixels, 0 on the hole).
double fill_front_priority(const InpaintTask& task, int col, int row);

// The two factors on their own.
double fill_confidence(const InpaintTask& task, int col, int row);
double fill_data_term(const InpaintTask& task, int col, int row);

// Same with an explicit confidence field (evolving state during a fill).
double fill_front_priority(const InpaintTask& task,
                           const std::vector<double>& confidence, int col,
                           int row);

// Lowest-cost admissible source patch for the given fill-front target.
// Throws when no candidate patch fits fully inside the known region.
SourceMatch best_source_patch(const InpaintTask& task, int target_col,
                              int target_row, const InpaintOptions& opts = {});

InpaintResult inpaint(const InpaintTask& task, const InpaintOptions& opts = {});

// Image extension: [image | inpainted gap of 0.4 W | image copy], then for
// images at least 3:4 wide the filled gap is split and wrapped around so the
// original sits centered; narrower images keep the full double-width canvas.
enum class ExtendLayout { rearranged, side_by_side };

struct ExtendedImage {
  ImageBuffer image;
  ExtendLayout layout = ExtendLayout::rearranged;
  int original_width = 0;
  std::vector<RectFace> face_rects;  // extended-image coordinates
};

struct ExtendOptions {
  int patch_radius = 4;
  double exclusion_penalty = 1e6;
  double face_dilation = 4.0;
  std::string debug_dir;
};

ExtendedImage extend_image(const ImageBuffer& img,
                           const std::vector<RectFace>& faces,
                           const ExtendOptions& opts = {});

}  // namespace fddb360
