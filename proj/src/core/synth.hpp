#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "core/annotations.hpp"
#include "core/inpaint.hpp"
#include "core/raster.hpp"

namespace fddb360 {

// Placement of one square sampling window inside an extended image.  Patches
// span the full image height; six of them are spread evenly along the width.
struct PatchSpec {
  int left = 0;
  int top = 0;
  int side = 0;
  std::string source_image_id;
  int patch_index = 0;
};

// One rendered circular image plus its remapped face boxes.
struct CircularSample {
  ImageBuffer image;
  std::vector<RectFace> faces;  // patch pixel coordinates
  std::string source_image_id;
  int patch_index = 0;
  ExtendLayout layout = ExtendLayout::rearranged;
};

struct RenderOptions {
  std::array<std::uint8_t, 3> fill_color{0, 0, 0};
  int patch_count = 6;
};

std::vector<PatchSpec> plan_patches(const ExtendedImage& ext,
                                    const std::string& source_image_id,
                                    int patch_count = 6);

// Inverse-lookup warp of the square patch into a circular image of the same
// side; pixels beyond the content disc take the fill color.
ImageBuffer render_fisheye(const ExtendedImage& ext, const PatchSpec& spec,
                           const RenderOptions& opts = {});

// Remaps one face box into a patch: kept only when more than half of its
// area lies inside the patch; trimmed to the patch, eight boundary points
// warped, and their minimum bounding rectangle returned.
std::optional<RectFace> map_face(const RectFace& face, const PatchSpec& spec);

// Renders all patches of an extended image and remaps every face.
std::vector<CircularSample> synthesize(const ExtendedImage& ext,
                                       const std::string& source_image_id,
                                       const RenderOptions& opts = {});

double rect_iou(const RectFace& a, const RectFace& b);

}  // namespace fddb360
