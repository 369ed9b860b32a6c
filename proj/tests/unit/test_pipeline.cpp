#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <doctest.h>

#include "core/error.hpp"
#include "core/image_io.hpp"
#include "core/pipeline.hpp"

using namespace fddb360;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::temp_directory_path() / ("fddb360_" + name);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A 60x60 scene with a dark blob face at the center; its tight box stays
// inside every patch of the extended image, so all six samples keep it.
void write_tiny_dataset(const fs::path& root) {
  fs::create_directories(root / "pics");
  ImageBuffer img(60, 60, 3);
  for (int r = 0; r < 60; ++r) {
    for (int c = 0; c < 60; ++c) {
      img.at(c, r, 0) = static_cast<std::uint8_t>(40 + c);
      img.at(c, r, 1) = static_cast<std::uint8_t>(90 + r / 2);
      img.at(c, r, 2) = static_cast<std::uint8_t>(150 - c / 2);
    }
  }
  for (int r = 24; r <= 36; ++r) {
    for (int c = 22; c <= 38; ++c) {
      const double q = (c - 30.0) * (c - 30.0) / 64.0 +
                       (r - 30.0) * (r - 30.0) / 36.0;
      if (q <= 1.0) {
        img.at(c, r, 0) = 30;
        img.at(c, r, 1) = 25;
        img.at(c, r, 2) = 20;
      }
    }
  }
  write_png((root / "pics" / "scene_a.png").string(), img);

  std::ofstream list(root / "fold01.txt", std::ios::binary);
  list << "scene_a\n1\n8.0 6.0 0.0 30.0 30.0 1\n";
}

PipelineConfig tiny_config(const fs::path& root, const fs::path& out) {
  PipelineConfig config;
  config.input_image_root = (root / "pics").string();
  config.annotation_files = {(root / "fold01.txt").string()};
  config.output_root = out.string();
  config.patch_radius = 2;
  return config;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("augment rect formulas") {
  CircularSample sample;
  sample.image = ImageBuffer(100, 100, 1, 0);
  sample.faces = {{10, 20, 30, 40}};

  const CircularSample h = augment(sample, AugmentOp::hflip);
  CHECK(h.faces[0].x == doctest::Approx(60));
  CHECK(h.faces[0].y == doctest::Approx(20));
  CHECK(h.faces[0].w == doctest::Approx(30));
  CHECK(h.faces[0].h == doctest::Approx(40));

  const CircularSample r90 = augment(sample, AugmentOp::rot90);
  CHECK(r90.faces[0].x == doctest::Approx(40));
  CHECK(r90.faces[0].y == doctest::Approx(10));
  CHECK(r90.faces[0].w == doctest::Approx(40));
  CHECK(r90.faces[0].h == doctest::Approx(30));

  const CircularSample r180 = augment(sample, AugmentOp::rot180);
  CHECK(r180.faces[0].x == doctest::Approx(60));
  CHECK(r180.faces[0].y == doctest::Approx(40));

  const CircularSample r270 = augment(sample, AugmentOp::rot270);
  CHECK(r270.faces[0].x == doctest::Approx(20));
  CHECK(r270.faces[0].y == doctest::Approx(60));
  CHECK(r270.faces[0].w == doctest::Approx(40));
  CHECK(r270.faces[0].h == doctest::Approx(30));
}

TEST_CASE("rot180 is an involution") {
  std::mt19937_64 rng(81);
  CircularSample sample;
  sample.image = ImageBuffer(32, 32, 3);
  std::uniform_int_distribution<int> u(0, 255);
  for (auto& v : sample.image.data) v = static_cast<std::uint8_t>(u(rng));
  sample.faces = {{3.5, 8.25, 10, 12}};

  const CircularSample twice =
      augment(augment(sample, AugmentOp::rot180), AugmentOp::rot180);
  CHECK(twice.image.data == sample.image.data);
  CHECK(twice.faces[0].x == doctest::Approx(sample.faces[0].x));
  CHECK(twice.faces[0].y == doctest::Approx(sample.faces[0].y));
}

TEST_CASE("box transforms commute with pixel transforms") {
  // Paint the face rect white on black, transform the image, and re-derive
  // the box from the white pixels; it must match the transformed rect.
  const RectFace rect{6, 11, 9, 5};
  CircularSample sample;
  sample.image = ImageBuffer(40, 40, 1, 0);
  for (int r = 11; r < 16; ++r) {
    for (int c = 6; c < 15; ++c) sample.image.at(c, r, 0) = 255;
  }
  sample.faces = {rect};

  for (const AugmentOp op : {AugmentOp::hflip, AugmentOp::rot90,
                             AugmentOp::rot180, AugmentOp::rot270}) {
    const CircularSample out = augment(sample, op);
    int min_c = 40, max_c = -1, min_r = 40, max_r = -1;
    for (int r = 0; r < 40; ++r) {
      for (int c = 0; c < 40; ++c) {
        if (out.image.at(c, r, 0) == 255) {
          min_c = std::min(min_c, c);
          max_c = std::max(max_c, c);
          min_r = std::min(min_r, r);
          max_r = std::max(max_r, r);
        }
      }
    }
    const RectFace& f = out.faces[0];
    CHECK(std::abs(f.x - min_c) <= 1.0);
    CHECK(std::abs(f.y - min_r) <= 1.0);
    CHECK(std::abs((f.x + f.w) - (max_c + 1)) <= 1.0);
    CHECK(std::abs((f.y + f.h) - (max_r + 1)) <= 1.0);
  }
}

TEST_CASE("config parsing") {
  PipelineConfig config;
  config.set("patch_radius", "6");
  CHECK(config.patch_radius == 6);
  config.set("fill_color", "0a1b2c");
  CHECK(config.fill_color[0] == 0x0a);
  CHECK(config.fill_color[2] == 0x2c);
  config.set("augmentations", "hflip,rot270");
  REQUIRE(config.augmentations.size() == 2);
  CHECK(config.augmentations[1] == AugmentOp::rot270);
  config.set("annotations", "a.txt;b.txt");
  CHECK(config.annotation_files.size() == 2);

  CHECK_THROWS_AS(config.set("patch_radius", "zero"), Error);
  CHECK_THROWS_AS(config.set("jobs", "0"), Error);
  CHECK_THROWS_AS(config.set("fill_color", "red"), Error);
  CHECK_THROWS_AS(config.set("no_such_key", "1"), Error);
  // Only right-angle augmentations exist.
  CHECK_THROWS_AS(config.set("augmentations", "rot45"), Error);
}

TEST_CASE("config file loading") {
  TempDir tmp("config");
  {
    std::ofstream out(tmp.path / "run.conf");
    out << "# comment\n"
        << "patch_radius 3\n"
        << "seed = 99\n"
        << "output_root=/tmp/somewhere\n";
  }
  PipelineConfig config;
  config.load_file((tmp.path / "run.conf").string());
  CHECK(config.patch_radius == 3);
  CHECK(config.seed == 99);
  CHECK(config.output_root == "/tmp/somewhere");
}

TEST_CASE("manifest round trip and totals check") {
  RunManifest manifest;
  manifest.tool_version = "9.9.9";
  manifest.config_snapshot = {{"seed", "7"}};
  manifest.entries.push_back({"a/img_1", 1, true, "", 6, 13});
  manifest.entries.push_back({"a/img_2", 2, false, "image too small", 0, 0});

  std::ostringstream out;
  write_manifest(out, manifest);
  std::istringstream in(out.str());
  const RunManifest back = parse_manifest(in);
  CHECK(back.tool_version == "9.9.9");
  REQUIRE(back.entries.size() == 2);
  CHECK(back.entries[0].faces == 13);
  CHECK(back.entries[1].reason == "image too small");
  CHECK(back.total_images() == 6);
  CHECK(back.failure_count() == 1);

  // Tampered totals are rejected.
  std::string text = out.str();
  text.replace(text.find("totals images 6"), 15, "totals images 7");
  std::istringstream bad(text);
  CHECK_THROWS_AS(parse_manifest(bad), Error);
}

TEST_CASE("run_synthesis on a one-image dataset") {
  TempDir tmp("synth_tiny");
  write_tiny_dataset(tmp.path);
  const PipelineConfig config = tiny_config(tmp.path, tmp.path / "out");

  const RunManifest manifest = run_synthesis(config);
  REQUIRE(manifest.entries.size() == 1);
  CHECK(manifest.entries[0].ok);
  CHECK(manifest.entries[0].images == 6);
  CHECK(manifest.entries[0].faces == 6);  // centered face survives every patch
  CHECK(manifest.total_images() == 6);

  // The outputs exist and re-parse.
  for (int p = 0; p < 6; ++p) {
    const fs::path png =
        tmp.path / "out" / "images" / ("scene_a_p" + std::to_string(p) + ".png");
    CHECK(fs::exists(png));
    const ImageBuffer img = read_image(png.string());
    CHECK(img.width == img.height);
  }
  std::ifstream ann(tmp.path / "out" / "annotations" / "fold_01.txt");
  const auto records = parse_rect(ann);
  CHECK(records.size() == 6);
  std::ifstream mf(tmp.path / "out" / "manifest.txt");
  const RunManifest reparsed = parse_manifest(mf);
  CHECK(reparsed.total_faces() == manifest.total_faces());
}

TEST_CASE("run_synthesis with an empty annotation file succeeds") {
  TempDir tmp("synth_empty");
  fs::create_directories(tmp.path / "pics");
  { std::ofstream list(tmp.path / "fold01.txt"); }
  const PipelineConfig config = tiny_config(tmp.path, tmp.path / "out");
  const RunManifest manifest = run_synthesis(config);
  CHECK(manifest.entries.empty());
  CHECK(manifest.total_images() == 0);
  CHECK(fs::exists(tmp.path / "out" / "manifest.txt"));
}

TEST_CASE("run_synthesis records per-image failures and continues") {
  TempDir tmp("synth_fail");
  write_tiny_dataset(tmp.path);
  {
    std::ofstream list(tmp.path / "fold01.txt", std::ios::app);
    list << "missing_image\n0\n";
  }
  const PipelineConfig config = tiny_config(tmp.path, tmp.path / "out");
  const RunManifest manifest = run_synthesis(config);
  REQUIRE(manifest.entries.size() == 2);
  CHECK(manifest.entries[0].ok);
  CHECK_FALSE(manifest.entries[1].ok);
  CHECK(manifest.entries[1].reason.find("not found") != std::string::npos);
  CHECK(manifest.failure_count() == 1);
}

TEST_CASE("worker count does not change the outputs") {
  TempDir tmp("synth_jobs");
  write_tiny_dataset(tmp.path);
  {
    // Second image so two workers actually overlap.
    std::ofstream list(tmp.path / "fold01.txt", std::ios::app);
    list << "scene_a\n1\n8.0 6.0 0.0 30.0 30.0 1\n";
  }

  PipelineConfig one = tiny_config(tmp.path, tmp.path / "out1");
  one.worker_count = 1;
  PipelineConfig two = tiny_config(tmp.path, tmp.path / "out2");
  two.worker_count = 2;
  run_synthesis(one);
  run_synthesis(two);

  CHECK(slurp(tmp.path / "out1" / "manifest.txt") ==
        slurp(tmp.path / "out2" / "manifest.txt"));
  CHECK(slurp(tmp.path / "out1" / "annotations" / "all.txt") ==
        slurp(tmp.path / "out2" / "annotations" / "all.txt"));
  CHECK(slurp(tmp.path / "out1" / "images" / "scene_a_p0.png") ==
        slurp(tmp.path / "out2" / "images" / "scene_a_p0.png"));
}

TEST_CASE("run_augment materializes the requested ops") {
  TempDir tmp("augment");
  write_tiny_dataset(tmp.path);
  const PipelineConfig synth = tiny_config(tmp.path, tmp.path / "out");
  run_synthesis(synth);

  PipelineConfig aug;
  aug.input_root = (tmp.path / "out").string();
  aug.output_root = (tmp.path / "aug").string();
  aug.augmentations = {AugmentOp::hflip, AugmentOp::rot90};
  const RunResult result = run_augment(aug);
  CHECK(result.images == 12);  // 6 samples x 2 ops
  CHECK(result.failures == 0);
  CHECK(fs::exists(tmp.path / "aug" / "images" / "scene_a_p0_hflip.png"));
  CHECK(fs::exists(tmp.path / "aug" / "images" / "scene_a_p3_rot90.png"));

  std::ifstream in(tmp.path / "aug" / "annotations" / "fold_01.txt");
  const auto records = parse_rect(in);
  CHECK(records.size() == 12);

  // hflip must mirror the box of the source sample.
  std::ifstream src_in(tmp.path / "out" / "annotations" / "fold_01.txt");
  const auto src = parse_rect(src_in);
  const double side = 60 * 1.4;  // sample side = extended height? no: height
  (void)side;
  const ImageBuffer sample =
      read_image((tmp.path / "out" / "images" / "scene_a_p0.png").string());
  const double s = sample.width;
  const RectFace& orig = src[0].rects[0];
  for (const ImageRecord& rec : records) {
    if (rec.image_path == "images/scene_a_p0_hflip.png") {
      CHECK(rec.rects[0].x ==
            doctest::Approx(s - orig.x - orig.w).epsilon(0.001));
      CHECK(rec.rects[0].y == doctest::Approx(orig.y).epsilon(0.001));
    }
  }
}

TEST_CASE("run_augment random_pick is seed-deterministic") {
  TempDir tmp("augment_rng");
  write_tiny_dataset(tmp.path);
  run_synthesis(tiny_config(tmp.path, tmp.path / "out"));

  auto run_pick = [&](const std::string& out_name, std::uint64_t seed) {
    PipelineConfig aug;
    aug.input_root = (tmp.path / "out").string();
    aug.output_root = (tmp.path / out_name).string();
    aug.augmentations = {AugmentOp::hflip, AugmentOp::rot90, AugmentOp::rot180};
    aug.random_pick = true;
    aug.seed = seed;
    run_augment(aug);
    return slurp(tmp.path / out_name / "annotations" / "all.txt");
  };
  CHECK(run_pick("aug_a", 5) == run_pick("aug_b", 5));
  CHECK(run_pick("aug_c", 6) != run_pick("aug_a", 5));
}

TEST_CASE("run_folds writes the five pairings") {
  TempDir tmp("folds");
  const fs::path ann = tmp.path / "in" / "annotations";
  fs::create_directories(ann);
  for (int f = 1; f <= 10; ++f) {
    char name[32];
    std::snprintf(name, sizeof(name), "fold_%02d.txt", f);
    std::ofstream out(ann / name);
    out << "images/f" << f << ".png\n1\n1.00 2.00 3.00 4.00\n";
  }
  PipelineConfig config;
  config.input_root = (tmp.path / "in").string();
  config.output_root = (tmp.path / "out").string();
  const RunResult result = run_folds(config);
  CHECK(result.images == 10);

  std::ifstream test1(tmp.path / "out" / "folds" / "split_1_test.txt");
  const auto test_records = parse_rect(test1);
  REQUIRE(test_records.size() == 2);
  CHECK(test_records[0].image_path == "images/f1.png");
  CHECK(test_records[1].image_path == "images/f2.png");
  std::ifstream train1(tmp.path / "out" / "folds" / "split_1_train.txt");
  CHECK(parse_rect(train1).size() == 8);

  // Sample appears in exactly one test file across the five splits.
  int appearances = 0;
  for (int k = 1; k <= 5; ++k) {
    std::ifstream in(tmp.path / "out" / "folds" /
                     ("split_" + std::to_string(k) + "_test.txt"));
    for (const auto& rec : parse_rect(in)) {
      if (rec.image_path == "images/f7.png") ++appearances;
    }
  }
  CHECK(appearances == 1);
}

TEST_CASE("run_folds requires all ten folds") {
  TempDir tmp("folds_missing");
  const fs::path ann = tmp.path / "in" / "annotations";
  fs::create_directories(ann);
  std::ofstream out(ann / "fold_01.txt");
  out << "images/a.png\n0\n";
  out.close();
  PipelineConfig config;
  config.input_root = (tmp.path / "in").string();
  config.output_root = (tmp.path / "out").string();
  CHECK_THROWS_AS(run_folds(config), Error);
}

TEST_CASE("run_evaluate writes curves and the miss scatter") {
  TempDir tmp("eval");
  {
    std::ofstream gt(tmp.path / "gt.txt");
    gt << "images/a.png\n2\n10.00 10.00 20.00 20.00\n50.00 50.00 20.00 20.00\n";
    std::ofstream det(tmp.path / "det.txt");
    det << "images/a.png\n3\n10 10 20 20 0.9\n70 10 20 20 0.8\n50 50 20 20 0.7\n";
  }
  fs::create_directories(tmp.path / "root" / "images");
  write_png((tmp.path / "root" / "images" / "a.png").string(),
            ImageBuffer(100, 100, 3, 10));

  PipelineConfig config;
  config.ground_truth = (tmp.path / "gt.txt").string();
  config.detections = (tmp.path / "det.txt").string();
  config.output_root = (tmp.path / "out").string();
  config.image_root = (tmp.path / "root").string();
  config.score_threshold = 0.85;  // only the first detection operates
  const RunResult result = run_evaluate(config);

  CHECK(std::abs(result.auc - 13.0 / 24.0) < 1e-12);
  CHECK(fs::exists(tmp.path / "out" / "pr_curve.csv"));
  CHECK(fs::exists(tmp.path / "out" / "discrete_roc.csv"));

  // At the 0.85 operating point the face at (50,50) is missed; its center
  // (60,60) normalizes to (0.2, 0.2).
  const std::string fn = slurp(tmp.path / "out" / "fn_scatter.csv");
  CHECK(fn == "u,v\n0.2,0.2\n");
}

}  // TEST_SUITE
