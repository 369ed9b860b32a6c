#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "core/annotations.hpp"

namespace fddb360 {

struct Detection {
  std::string image_id;
  RectFace rect;
  double score = 0.0;
};

struct EvalPoint {
  double threshold = 0.0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0.0;
  double recall = 0.0;
};

struct EvalCurve {
  std::vector<EvalPoint> points;
};

// Unit-circle-normalized location of a missed face.
struct FNPoint {
  double u = 0.0;
  double v = 0.0;
};

struct MatchResult {
  std::vector<bool> det_is_tp;   // parallel to the detections, score order
  std::vector<bool> gt_matched;  // parallel to the ground truth
};

// Greedy one-to-one matching in descending score order; a detection is a
// true positive when its best unmatched ground-truth IoU reaches the
// threshold.  Score ties keep input order.
MatchResult match_detections(const std::vector<RectFace>& gt,
                             std::vector<Detection> dets,
                             double iou_threshold = 0.5);

// Dataset-level labeled detections, ready for threshold sweeps.
struct LabeledDetection {
  double score = 0.0;
  bool is_tp = false;
};

struct SweepInput {
  std::vector<LabeledDetection> detections;
  long total_gt = 0;
};

// Labels every detection against its image's ground truth.
SweepInput label_dataset(const std::vector<ImageRecord>& gt,
                         const std::vector<Detection>& detections,
                         double iou_threshold = 0.5);

struct PrResult {
  EvalCurve curve;
  double auc = 0.0;
};

// Precision/recall over a sweep of every distinct score, with the area under
// the precision(recall) curve by trapezoidal integration.
PrResult pr_curve(const SweepInput& input);

// FDDB-style discrete curve: absolute false-positive count vs TP rate.  The
// (fp, tp/total_gt) pairs are carried in the EvalPoint fp and recall fields.
EvalCurve discrete_roc(const SweepInput& input);

// Center of a ground-truth box normalized so the circular image has radius
// 1; centers outside the circle are projected back onto it.
FNPoint fn_location(const RectFace& gt, double image_side);

// Unmatched-face locations at a fixed operating point (detections below
// `score_threshold` are ignored).  `image_sides` pairs image ids with their
// (square) pixel side.
std::vector<FNPoint> fn_scatter(
    const std::vector<ImageRecord>& gt,
    const std::vector<Detection>& detections,
    const std::vector<std::pair<std::string, double>>& image_sides,
    double iou_threshold = 0.5,
    double score_threshold = -std::numeric_limits<double>::infinity());

// Detection list file: image path line, count line, "x y w h score" lines.
std::vector<Detection> parse_detections(std::istream& in);

void write_curve_csv(std::ostream& out, const EvalCurve& curve);
void write_fn_csv(std::ostream& out, const std::vector<FNPoint>& points);

}  // namespace fddb360
