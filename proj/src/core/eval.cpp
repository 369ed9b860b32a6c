#include "core/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "core/error.hpp"
#include "core/synth.hpp"

namespace fddb360 {

MatchResult match_detections(const std::vector<RectFace>& gt,
                             std::vector<Detection> dets,
                             double iou_threshold) {
  std::stable_sort(dets.begin(), dets.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.score > b.score;
                   });
  MatchResult result;
  result.det_is_tp.assign(dets.size(), false);
  result.gt_matched.assign(gt.size(), false);
  for (std::size_t d = 0; d < dets.size(); ++d) {
    double best_iou = 0.0;
    std::size_t best_g = gt.size();
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (result.gt_matched[g]) continue;
      const double iou = rect_iou(gt[g], dets[d].rect);
      if (iou > best_iou) {
        best_iou = iou;
        best_g = g;
      }
    }
    if (best_g < gt.size() && best_iou >= iou_threshold) {
      result.det_is_tp[d] = true;
      result.gt_matched[best_g] = true;
    }
  }
  return result;
}

SweepInput label_dataset(const std::vector<ImageRecord>& gt,
                         const std::vector<Detection>& detections,
                         double iou_threshold) {
  std::map<std::string, std::vector<RectFace>> gt_by_image;
  SweepInput input;
  for (const ImageRecord& rec : gt) {
    gt_by_image[rec.image_path] = rec.rects;
    input.total_gt += static_cast<long>(rec.rects.size());
  }
  std::map<std::string, std::vector<Detection>> dets_by_image;
  for (const Detection& det : detections) {
    dets_by_image[det.image_id].push_back(det);
  }
  for (auto& [image_id, dets] : dets_by_image) {
    const auto it = gt_by_image.find(image_id);
    static const std::vector<RectFace> kEmpty;
    const std::vector<RectFace>& rects =
        it != gt_by_image.end() ? it->second : kEmpty;
    std::vector<Detection> sorted = dets;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Detection& a, const Detection& b) {
                       return a.score > b.score;
                     });
    const MatchResult matches = match_detections(rects, sorted, iou_threshold);
    for (std::size_t d = 0; d < sorted.size(); ++d) {
      input.detections.push_back({sorted[d].score, matches.det_is_tp[d]});
    }
  }
  return input;
}

namespace {

// Sweep at every distinct score, descending.
std::vector<EvalPoint> sweep(const SweepInput& input) {
  if (input.total_gt <= 0) {
    throw_invalid("evaluation requires at least one ground-truth face");
  }
  std::vector<LabeledDetection> dets = input.detections;
  std::sort(dets.begin(), dets.end(),
            [](const LabeledDetection& a, const LabeledDetection& b) {
              return a.score > b.score;
            });
  std::vector<EvalPoint> points;
  long tp = 0, fp = 0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].is_tp) {
      ++tp;
    } else {
      ++fp;
    }
    const bool last_of_score =
        i + 1 == dets.size() || dets[i + 1].score != dets[i].score;
    if (!last_of_score) continue;
    EvalPoint pt;
    pt.threshold = dets[i].score;
    pt.tp = tp;
    pt.fp = fp;
    pt.fn = input.total_gt - tp;
    pt.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 1.0;
    pt.recall = static_cast<double>(tp) / input.total_gt;
    points.push_back(pt);
  }
  return points;
}

}  // namespace

PrResult pr_curve(const SweepInput& input) {
  PrResult result;
  result.curve.points = sweep(input);

  // Integrate precision over recall.  Where several thresholds share a
  // recall, the lowest-precision (latest) point stands for it; the segment
  // from recall 0 to the first distinct recall extends that precision as a
  // constant.
  std::vector<std::pair<double, double>> pr;  // (recall, precision)
  for (const EvalPoint& pt : result.curve.points) {
    if (!pr.empty() && pr.back().first == pt.recall) {
      pr.back().second = pt.precision;
    } else {
      pr.emplace_back(pt.recall, pt.precision);
    }
  }
  double auc = 0.0;
  double prev_r = 0.0;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    const double prev_p = i == 0 ? pr[i].second : pr[i - 1].second;
    auc += (pr[i].first - prev_r) * (pr[i].second + prev_p) / 2.0;
    prev_r = pr[i].first;
  }
  result.auc = auc;
  return result;
}

EvalCurve discrete_roc(const SweepInput& input) {
  EvalCurve curve;
  curve.points = sweep(input);
  return curve;
}

FNPoint fn_location(const RectFace& gt, double image_side) {
  const double half = image_side / 2.0;
  FNPoint p{(gt.cx() - half) / half, (gt.cy() - half) / half};
  const double norm = std::hypot(p.u, p.v);
  if (norm > 1.0) {
    p.u /= norm;
    p.v /= norm;
  }
  return p;
}

std::vector<FNPoint> fn_scatter(
    const std::vector<ImageRecord>& gt,
    const std::vector<Detection>& detections,
    const std::vector<std::pair<std::string, double>>& image_sides,
    double iou_threshold, double score_threshold) {
  std::map<std::string, double> sides(image_sides.begin(), image_sides.end());
  std::map<std::string, std::vector<Detection>> dets_by_image;
  for (const Detection& det : detections) {
    if (det.score >= score_threshold) dets_by_image[det.image_id].push_back(det);
  }
  std::vector<FNPoint> points;
  for (const ImageRecord& rec : gt) {
    const auto side_it = sides.find(rec.image_path);
    if (side_it == sides.end()) {
      throw_invalid("fn_scatter: no image side for '" + rec.image_path + "'");
    }
    const auto det_it = dets_by_image.find(rec.image_path);
    static const std::vector<Detection> kNone;
    const MatchResult matches = match_detections(
        rec.rects, det_it != dets_by_image.end() ? det_it->second : kNone,
        iou_threshold);
    for (std::size_t g = 0; g < rec.rects.size(); ++g) {
      if (!matches.gt_matched[g]) {
        points.push_back(fn_location(rec.rects[g], side_it->second));
      }
    }
  }
  return points;
}

std::vector<Detection> parse_detections(std::istream& in) {
  std::vector<Detection> detections;
  std::string line;
  int line_no = 0;
  auto strip = [](const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string path = strip(line);
    if (path.empty()) continue;
    if (!std::getline(in, line)) {
      throw_parse("missing detection-count line", line_no);
    }
    ++line_no;
    long count = -1;
    try {
      count = std::stol(strip(line));
    } catch (const std::exception&) {
      count = -1;
    }
    if (count < 0) throw_parse("expected a non-negative detection count", line_no);
    for (long i = 0; i < count; ++i) {
      if (!std::getline(in, line)) {
        throw_parse("detection count does not match the lines that follow",
                    line_no);
      }
      ++line_no;
      std::istringstream ss(line);
      Detection det;
      det.image_id = path;
      if (!(ss >> det.rect.x >> det.rect.y >> det.rect.w >> det.rect.h >>
            det.score)) {
        throw_parse("malformed detection line", line_no);
      }
      if (!(det.rect.w > 0.0) || !(det.rect.h > 0.0)) {
        throw_parse("detection width/height must be positive", line_no);
      }
      detections.push_back(std::move(det));
    }
  }
  return detections;
}

void write_curve_csv(std::ostream& out, const EvalCurve& curve) {
  out << "threshold,tp,fp,fn,precision,recall\n";
  char buf[160];
  for (const EvalPoint& pt : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.12g,%ld,%ld,%ld,%.12g,%.12g\n",
                  pt.threshold, pt.tp, pt.fp, pt.fn, pt.precision, pt.recall);
    out << buf;
  }
  if (!out) throw_io("write_curve_csv: stream failure");
}

void write_fn_csv(std::ostream& out, const std::vector<FNPoint>& points) {
  out << "u,v\n";
  char buf[80];
  for (const FNPoint& p : points) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", p.u, p.v);
    out << buf;
  }
  if (!out) throw_io("write_fn_csv: stream failure");
}

}  // namespace fddb360
