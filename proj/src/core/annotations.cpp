#include "core/annotations.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "core/error.hpp"

namespace fddb360 {

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Shared reader for the path / count / one-face-per-line layout.
template <typename ParseFace>
std::vector<ImageRecord> parse_face_list(std::istream& in, ParseFace parse_face) {
  std::vector<ImageRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string path = strip(line);
    if (path.empty()) continue;  // tolerate blank separator/trailing lines

    ImageRecord rec;
    rec.image_path = path;

    if (!std::getline(in, line)) {
      throw_parse("missing face-count line after image path", line_no);
    }
    ++line_no;
    long count = -1;
    try {
      std::size_t pos = 0;
      count = std::stol(strip(line), &pos);
      if (pos != strip(line).size()) count = -1;
    } catch (const std::exception&) {
      count = -1;
    }
    if (count < 0) throw_parse("expected a non-negative face count", line_no);

    for (long i = 0; i < count; ++i) {
      if (!std::getline(in, line)) {
        throw_parse("face count says " + std::to_string(count) + " but only " +
                        std::to_string(i) + " face lines follow",
                    line_no);
      }
      ++line_no;
      if (strip(line).empty()) {
        throw_parse("blank line where a face was expected", line_no);
      }
      parse_face(rec, strip(line), line_no);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace

std::vector<ImageRecord> parse_fddb(std::istream& in) {
  return parse_face_list(in, [](ImageRecord& rec, const std::string& line,
                                int line_no) {
    std::istringstream ss(line);
    EllipseFace e;
    double score = 1.0;  // trailing detection-score column, always 1 in FDDB
    if (!(ss >> e.major_radius >> e.minor_radius >> e.angle >> e.center_col >>
          e.center_row)) {
      throw_parse("malformed ellipse line", line_no);
    }
    ss >> score;  // optional
    if (!(e.major_radius > 0.0) || !(e.minor_radius > 0.0)) {
      throw_parse("ellipse radii must be positive", line_no);
    }
    if (e.major_radius < e.minor_radius) {
      throw_parse("major radius smaller than minor radius", line_no);
    }
    rec.ellipses.push_back(e);
  });
}

std::vector<ImageRecord> parse_rect(std::istream& in) {
  return parse_face_list(
      in, [](ImageRecord& rec, const std::string& line, int line_no) {
        std::istringstream ss(line);
        RectFace r;
        if (!(ss >> r.x >> r.y >> r.w >> r.h)) {
          throw_parse("malformed rectangle line", line_no);
        }
        if (!(r.w > 0.0) || !(r.h > 0.0)) {
          throw_parse("rectangle width/height must be positive", line_no);
        }
        rec.rects.push_back(r);
      });
}

std::vector<std::string> parse_fold_list(std::istream& in) {
  std::vector<std::string> paths;
  std::string line;
  while (std::getline(in, line)) {
    const std::string path = strip(line);
    if (!path.empty()) paths.push_back(path);
  }
  return paths;
}

RectFace ellipse_to_rect(const EllipseFace& e) {
  if (!(e.major_radius > 0.0) || !(e.minor_radius > 0.0)) {
    throw_domain("ellipse_to_rect: radii must be positive");
  }
  const double c = std::cos(e.angle);
  const double s = std::sin(e.angle);
  const double a = e.major_radius;
  const double b = e.minor_radius;
  const double half_w = std::sqrt(a * a * c * c + b * b * s * s);
  const double half_h = std::sqrt(a * a * s * s + b * b * c * c);
  return {e.center_col - half_w, e.center_row - half_h, 2.0 * half_w,
          2.0 * half_h};
}

void write_rect_record(std::ostream& out, const std::string& image_path,
                       const std::vector<RectFace>& faces) {
  out << image_path << "\n" << faces.size() << "\n";
  char buf[128];
  for (const RectFace& r : faces) {
    std::snprintf(buf, sizeof(buf), "%.2f %.2f %.2f %.2f\n", r.x, r.y, r.w,
                  r.h);
    out << buf;
  }
  if (!out) throw_io("write_rect_record: stream failure");
}

std::vector<FoldSplit> fold_split(const std::vector<ImageRecord>& records) {
  std::array<bool, 11> seen{};
  for (const ImageRecord& rec : records) {
    if (rec.fold_id < 1 || rec.fold_id > 10) {
      throw_invalid("fold_split: record '" + rec.image_path +
                    "' has fold id " + std::to_string(rec.fold_id));
    }
    seen[rec.fold_id] = true;
  }
  for (int f = 1; f <= 10; ++f) {
    if (!seen[f]) throw_invalid("fold_split: fold " + std::to_string(f) + " has no records");
  }
  std::vector<FoldSplit> splits;
  for (int k = 0; k < 5; ++k) {
    FoldSplit split;
    split.test_folds = {2 * k + 1, 2 * k + 2};
    for (const ImageRecord& rec : records) {
      if (rec.fold_id == split.test_folds[0] ||
          rec.fold_id == split.test_folds[1]) {
        split.test.push_back(&rec);
      } else {
        split.train.push_back(&rec);
      }
    }
    splits.push_back(std::move(split));
  }
  return splits;
}

}  // namespace fddb360
