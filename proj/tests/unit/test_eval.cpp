#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "core/error.hpp"
#include "core/eval.hpp"

using namespace fddb360;

namespace {

SweepInput three_detection_case() {
  // 2 ground-truth faces; detections at scores .9 (TP), .8 (FP), .7 (TP).
  SweepInput input;
  input.total_gt = 2;
  input.detections = {{0.9, true}, {0.8, false}, {0.7, true}};
  return input;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("match_detections basics") {
  const std::vector<RectFace> gt{{10, 10, 20, 20}};
  const std::vector<Detection> dets{{"img", {10, 10, 20, 20}, 0.9}};
  const MatchResult m = match_detections(gt, dets);
  CHECK(m.det_is_tp[0]);
  CHECK(m.gt_matched[0]);
}

TEST_CASE("one-to-one: a second detection on the same face is FP") {
  const std::vector<RectFace> gt{{10, 10, 20, 20}};
  const std::vector<Detection> dets{
      {"img", {11, 11, 20, 20}, 0.6},
      {"img", {10, 10, 20, 20}, 0.9},
  };
  const MatchResult m = match_detections(gt, dets);
  // Matching runs in score order: index 0 is the 0.9 detection.
  CHECK(m.det_is_tp[0]);
  CHECK_FALSE(m.det_is_tp[1]);
}

TEST_CASE("IoU threshold boundary") {
  const std::vector<RectFace> gt{{0, 0, 10, 10}};
  const MatchResult hit =
      match_detections(gt, {{"i", {0, 3, 10, 10}, 1.0}}, 0.5);
  CHECK(hit.det_is_tp[0]);  // IoU 70/130 ~ 0.538
  const MatchResult miss =
      match_detections(gt, {{"i", {0, 6, 10, 10}, 1.0}}, 0.5);
  CHECK_FALSE(miss.det_is_tp[0]);  // IoU 0.25
}

TEST_CASE("pr_curve reproduces the hand-enumerated sweep") {
  const PrResult pr = pr_curve(three_detection_case());
  REQUIRE(pr.curve.points.size() == 3);
  const EvalPoint& p0 = pr.curve.points[0];
  CHECK(p0.threshold == 0.9);
  CHECK(p0.tp == 1);
  CHECK(p0.fp == 0);
  CHECK(p0.fn == 1);
  CHECK(p0.precision == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p0.recall == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pr.curve.points[1].precision == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pr.curve.points[1].recall == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pr.curve.points[2].precision ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(pr.curve.points[2].recall == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(pr.auc - 13.0 / 24.0) < 1e-12);
}

TEST_CASE("pr_curve of a perfect detector is 1") {
  SweepInput input;
  input.total_gt = 2;
  input.detections = {{0.9, true}, {0.8, true}};
  CHECK(pr_curve(input).auc == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pr_curve with no detections is 0") {
  SweepInput input;
  input.total_gt = 3;
  const PrResult pr = pr_curve(input);
  CHECK(pr.curve.points.empty());
  CHECK(pr.auc == 0.0);
}

TEST_CASE("pr_curve requires ground truth") {
  SweepInput input;
  input.total_gt = 0;
  CHECK_THROWS_AS(pr_curve(input), Error);
  CHECK_THROWS_AS(discrete_roc(input), Error);
}

TEST_CASE("discrete_roc reproduces the hand-enumerated points") {
  const EvalCurve roc = discrete_roc(three_detection_case());
  REQUIRE(roc.points.size() == 3);
  CHECK(roc.points[0].fp == 0);
  CHECK(roc.points[0].recall == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(roc.points[1].fp == 1);
  CHECK(roc.points[1].recall == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(roc.points[2].fp == 1);
  CHECK(roc.points[2].recall == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("discrete_roc of a perfect single-score detector") {
  SweepInput input;
  input.total_gt = 2;
  input.detections = {{0.5, true}, {0.5, true}};
  const EvalCurve roc = discrete_roc(input);
  REQUIRE(roc.points.size() == 1);
  CHECK(roc.points[0].fp == 0);
  CHECK(roc.points[0].recall == doctest::Approx(1.0));
}

TEST_CASE("tp and fp counts are monotone along the sweep") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::bernoulli_distribution coin(0.4);
  SweepInput input;
  input.total_gt = 50;
  for (int i = 0; i < 200; ++i) input.detections.push_back({score(rng), coin(rng)});
  const EvalCurve roc = discrete_roc(input);
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    CHECK(roc.points[i].tp >= roc.points[i - 1].tp);
    CHECK(roc.points[i].fp >= roc.points[i - 1].fp);
    CHECK(roc.points[i].recall >= roc.points[i - 1].recall);
  }
}

TEST_CASE("appending lower-scored detections never relabels earlier ones") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> pos(0.0, 80.0);
  std::vector<RectFace> gt;
  for (int i = 0; i < 6; ++i) gt.push_back({pos(rng), pos(rng), 15, 15});
  std::vector<Detection> dets;
  for (int i = 0; i < 10; ++i) {
    dets.push_back({"img", {pos(rng), pos(rng), 15, 15}, 1.0 - 0.05 * i});
  }
  const MatchResult before = match_detections(gt, dets);
  dets.push_back({"img", {pos(rng), pos(rng), 15, 15}, 0.01});
  const MatchResult after = match_detections(gt, dets);
  for (std::size_t i = 0; i < before.det_is_tp.size(); ++i) {
    CHECK(before.det_is_tp[i] == after.det_is_tp[i]);
  }
}

TEST_CASE("matching is one-to-one") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> pos(0.0, 60.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<RectFace> gt;
    for (int i = 0; i < 5; ++i) gt.push_back({pos(rng), pos(rng), 20, 20});
    std::vector<Detection> dets;
    for (int i = 0; i < 12; ++i) {
      dets.push_back({"img", {pos(rng), pos(rng), 20, 20}, pos(rng)});
    }
    const MatchResult m = match_detections(gt, dets);
    const long tp = std::count(m.det_is_tp.begin(), m.det_is_tp.end(), true);
    const long matched =
        std::count(m.gt_matched.begin(), m.gt_matched.end(), true);
    CHECK(tp == matched);
    CHECK(tp <= static_cast<long>(gt.size()));
  }
}

TEST_CASE("fn_location examples") {
  const FNPoint center = fn_location({45, 45, 10, 10}, 100.0);
  CHECK(center.u == doctest::Approx(0.0));
  CHECK(center.v == doctest::Approx(0.0));

  const FNPoint edge = fn_location({95, 45, 10, 10}, 100.0);
  CHECK(edge.u == doctest::Approx(1.0));
  CHECK(edge.v == doctest::Approx(0.0));

  // Center outside the circle projects back onto it.
  const FNPoint outside = fn_location({105, 45, 10, 10}, 100.0);
  CHECK(outside.u == doctest::Approx(1.0));
  CHECK(outside.v == doctest::Approx(0.0));
}

TEST_CASE("fn_location is scale invariant") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> pos(0.0, 90.0);
  for (int i = 0; i < 50; ++i) {
    const RectFace r{pos(rng), pos(rng), 10, 8};
    const FNPoint a = fn_location(r, 100.0);
    const RectFace scaled{r.x * 3, r.y * 3, r.w * 3, r.h * 3};
    const FNPoint b = fn_location(scaled, 300.0);
    CHECK(a.u == doctest::Approx(b.u).epsilon(1e-12));
    CHECK(a.v == doctest::Approx(b.v).epsilon(1e-12));
  }
}

TEST_CASE("fn_scatter finds the misses") {
  ImageRecord rec;
  rec.image_path = "img";
  rec.rects = {{45, 45, 10, 10}, {0, 0, 10, 10}};
  const std::vector<std::pair<std::string, double>> sides{{"img", 100.0}};

  // One detection covers the corner face only; the centered face is missed.
  const std::vector<Detection> dets{{"img", {0, 0, 10, 10}, 0.8}};
  const auto misses = fn_scatter({rec}, dets, sides);
  REQUIRE(misses.size() == 1);
  CHECK(misses[0].u == doctest::Approx(0.0));
  CHECK(misses[0].v == doctest::Approx(0.0));

  // A perfect detector leaves nothing.
  const std::vector<Detection> all{{"img", {0, 0, 10, 10}, 0.8},
                                   {"img", {45, 45, 10, 10}, 0.9}};
  CHECK(fn_scatter({rec}, all, sides).empty());

  // Detections below the operating threshold do not count.
  const auto thresholded = fn_scatter({rec}, all, sides, 0.5, 0.85);
  CHECK(thresholded.size() == 1);
  for (const FNPoint& p : thresholded) {
    CHECK(p.u * p.u + p.v * p.v <= 1.0 + 1e-9);
  }
}

TEST_CASE("label_dataset counts detections on unknown images as FP") {
  ImageRecord rec;
  rec.image_path = "a";
  rec.rects = {{0, 0, 10, 10}};
  const std::vector<Detection> dets{{"a", {0, 0, 10, 10}, 0.9},
                                    {"phantom", {0, 0, 10, 10}, 0.8}};
  const SweepInput input = label_dataset({rec}, dets);
  CHECK(input.total_gt == 1);
  long tp = 0;
  for (const auto& d : input.detections) tp += d.is_tp ? 1 : 0;
  CHECK(tp == 1);
  CHECK(input.detections.size() == 2);
}

TEST_CASE("parse_detections") {
  std::istringstream in("img_a\n2\n1 2 3 4 0.9\n5 6 7 8 0.1\nimg_b\n0\n");
  const auto dets = parse_detections(in);
  REQUIRE(dets.size() == 2);
  CHECK(dets[0].image_id == "img_a");
  CHECK(dets[1].score == 0.1);

  std::istringstream bad("img\n1\n1 2 3\n");
  CHECK_THROWS_AS(parse_detections(bad), Error);
}

TEST_CASE("curve csv layout") {
  const PrResult pr = pr_curve(three_detection_case());
  std::ostringstream out;
  write_curve_csv(out, pr.curve);
  CHECK(out.str().substr(0, 36) == "threshold,tp,fp,fn,precision,recall\n");
  CHECK(out.str().find("0.9,1,0,1,1,0.5\n") != std::string::npos);
}

}  // TEST_SUITE
