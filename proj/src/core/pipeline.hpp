#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/annotations.hpp"
#include "core/eval.hpp"
#include "core/synth.hpp"

namespace fddb360 {

enum class AugmentOp { hflip, rot90, rot180, rot270 };

const char* augment_op_name(AugmentOp op);
AugmentOp augment_op_from_name(const std::string& name);

struct PipelineConfig {
  // synthesize
  std::string input_image_root;
  std::vector<std::string> annotation_files;  // FDDB ellipse lists, fold order
  std::vector<std::string> fold_lists;        // optional fold override, fold order
  std::string output_root;
  int patch_radius = 4;
  double exclusion_penalty = 1e6;  // per channel
  std::array<std::uint8_t, 3> fill_color{0, 0, 0};
  std::uint64_t seed = 0;
  int worker_count = 1;
  std::string debug_dir;

  // augment
  std::string input_root;
  std::vector<AugmentOp> augmentations;
  bool random_pick = false;  // one seed-chosen op per sample instead of all

  // evaluate
  std::string ground_truth;
  std::string detections;
  double iou_threshold = 0.5;
  double score_threshold = -std::numeric_limits<double>::infinity();
  std::string image_root;

  // Applies one "key value" or "key=value" setting; unknown keys error.
  void set(const std::string& key, const std::string& value);
  // Loads settings from a key-value text file ('#' comments allowed).
  void load_file(const std::string& path);
};

struct ManifestEntry {
  std::string image_path;
  int fold_id = 0;
  bool ok = false;
  std::string reason;  // exclusion reason when not ok
  long images = 0;
  long faces = 0;
};

struct RunManifest {
  std::string tool_version;
  std::vector<std::pair<std::string, std::string>> config_snapshot;
  std::vector<ManifestEntry> entries;

  long total_images() const;
  long total_faces() const;
  long failure_count() const;
};

void write_manifest(std::ostream& out, const RunManifest& manifest);
RunManifest parse_manifest(std::istream& in);

// Summary handed back by the subcommand drivers.
struct RunResult {
  long images = 0;
  long faces = 0;
  long failures = 0;
  double auc = std::numeric_limits<double>::quiet_NaN();  // evaluate only
};

// Full dataset synthesis: parse, extend, render, annotate, write.  Per-image
// failures are recorded in the manifest and skipped.
RunManifest run_synthesis(const PipelineConfig& config);

// Exact pixel permutation plus the matching box transform.
CircularSample augment(const CircularSample& sample, AugmentOp op);

// Materializes augmented copies of a synthesized dataset.
RunResult run_augment(const PipelineConfig& config);

// Writes the five train/test file pairs from the per-fold annotations.
RunResult run_folds(const PipelineConfig& config);

// Detection evaluation: PR curve with AUC, discrete ROC, FN scatter.
RunResult run_evaluate(const PipelineConfig& config);

RunResult manifest_summary(const RunManifest& manifest);

}  // namespace fddb360
