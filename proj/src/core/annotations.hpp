#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace fddb360 {

// FDDB ground-truth ellipse: major/minor radii, major-axis angle from the
// horizontal in radians, center in pixel coordinates.
struct EllipseFace {
  double major_radius = 0.0;
  double minor_radius = 0.0;
  double angle = 0.0;
  double center_col = 0.0;
  double center_row = 0.0;
};

// Axis-aligned face box, top-left corner plus width/height in pixels.
struct RectFace {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double cx() const { return x + w / 2.0; }
  double cy() const { return y + h / 2.0; }
};

// One annotated image; holds ellipse or rect faces depending on which file
// format it was parsed from.
struct ImageRecord {
  std::string image_path;
  int fold_id = 0;  // 1..10, 0 when unknown
  std::vector<EllipseFace> ellipses;
  std::vector<RectFace> rects;
};

struct FoldSplit {
  std::array<int, 2> test_folds;
  std::vector<const ImageRecord*> train;
  std::vector<const ImageRecord*> test;
};

// FDDB ellipse list: image path line, face-count line, then one
// "major minor angle cx cy 1" line per face.
std::vector<ImageRecord> parse_fddb(std::istream& in);

// Rectangle list in the same layout with "x y w h" face lines.
std::vector<ImageRecord> parse_rect(std::istream& in);

// One image path per line.
std::vector<std::string> parse_fold_list(std::istream& in);

// Tight axis-aligned bounding box of the rotated ellipse.
RectFace ellipse_to_rect(const EllipseFace& e);

// Writes the rectangle list format (2 fractional digits, LF newlines).
void write_rect_record(std::ostream& out, const std::string& image_path,
                       const std::vector<RectFace>& faces);

// The five train/test partitions with test folds {1,2},{3,4},...,{9,10}.
// Every fold 1..10 must be present in `records`.
std::vector<FoldSplit> fold_split(const std::vector<ImageRecord>& records);

}  // namespace fddb360
