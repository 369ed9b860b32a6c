// Command-line front end; everything goes through the C API of the shared
// library.

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fddb360.h"

namespace {

struct ConfigDeleter {
  void operator()(fddb360_config* c) const { fddb360_config_free(c); }
};
using ConfigPtr = std::unique_ptr<fddb360_config, ConfigDeleter>;

struct CommonArgs {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> settings;

  void add(const std::string& key, const std::string& value) {
    settings.emplace_back(key, value);
  }
};

int fail(const std::string& context) {
  std::fprintf(stderr, "fddb360: %s: %s\n", context.c_str(),
               fddb360_last_error());
  return 1;
}

ConfigPtr build_config(const CommonArgs& args, int& exit_code) {
  ConfigPtr config(fddb360_config_new());
  exit_code = 0;
  if (!args.config_file.empty()) {
    if (fddb360_config_load_file(config.get(), args.config_file.c_str()) !=
        FDDB360_OK) {
      exit_code = fail("config file");
      return nullptr;
    }
  }
  for (const auto& [key, value] : args.settings) {
    if (fddb360_config_set(config.get(), key.c_str(), value.c_str()) !=
        FDDB360_OK) {
      exit_code = fail("--" + key);
      return nullptr;
    }
  }
  return config;
}

using RunFn = fddb360_status (*)(const fddb360_config*, fddb360_result**);

int run(const CommonArgs& args, RunFn fn, const char* verb) {
  int exit_code = 0;
  ConfigPtr config = build_config(args, exit_code);
  if (!config) return exit_code;

  fddb360_result* result = nullptr;
  const fddb360_status status = fn(config.get(), &result);
  if (status != FDDB360_OK && status != FDDB360_PARTIAL) {
    return fail(verb);
  }
  std::printf("%s: %lld images, %lld faces", verb,
              static_cast<long long>(fddb360_result_images(result)),
              static_cast<long long>(fddb360_result_faces(result)));
  if (fddb360_result_failures(result) > 0) {
    std::printf(", %lld inputs failed (see manifest)",
                static_cast<long long>(fddb360_result_failures(result)));
  }
  const double auc = fddb360_result_auc(result);
  if (!std::isnan(auc)) std::printf(", pr-auc %.6f", auc);
  std::printf("\n");
  fddb360_result_free(result);
  return status == FDDB360_PARTIAL ? 2 : 0;
}

// CLI11 stores values into strings; they are forwarded to the config as-is
// so flags and config-file keys stay interchangeable.
void bind_option(CLI::App* cmd, CommonArgs& args, const std::string& flag,
                 const std::string& key, const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&args, key](const std::string& v) { args.add(key, v); }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fisheye-style face dataset synthesis and evaluation"};
  app.set_version_flag("--version", std::string(fddb360_version()));
  app.require_subcommand(1);

  CommonArgs synth_args, aug_args, folds_args, eval_args;

  CLI::App* synth = app.add_subcommand(
      "synthesize", "Build circular fisheye-looking samples from FDDB inputs");
  synth->add_option("--config", synth_args.config_file, "Key-value config file");
  bind_option(synth, synth_args, "--images", "input_image_root",
              "Root directory of the source images");
  bind_option(synth, synth_args, "--annotations", "annotations",
              "FDDB ellipse list files in fold order, ';'-separated");
  bind_option(synth, synth_args, "--fold-lists", "fold_lists",
              "Optional fold membership files, ';'-separated");
  bind_option(synth, synth_args, "--output", "output_root", "Output directory");
  bind_option(synth, synth_args, "--patch-radius", "patch_radius",
              "Inpainting patch radius (default 4)");
  bind_option(synth, synth_args, "--penalty", "exclusion_penalty",
              "Per-channel cost penalty for face/skin sources (default 1e6)");
  bind_option(synth, synth_args, "--fill-color", "fill_color",
              "RRGGBB fill outside the content disc (default 000000)");
  bind_option(synth, synth_args, "--seed", "seed", "Random seed");
  bind_option(synth, synth_args, "--jobs", "jobs", "Worker thread count");
  bind_option(synth, synth_args, "--debug-dir", "debug_dir",
              "Write per-iteration fill-front images here");

  CLI::App* aug = app.add_subcommand(
      "augment", "Materialize flipped/rotated copies of a synthesized dataset");
  aug->add_option("--config", aug_args.config_file, "Key-value config file");
  bind_option(aug, aug_args, "--input", "input_root",
              "Root of a synthesized dataset");
  bind_option(aug, aug_args, "--output", "output_root", "Output directory");
  bind_option(aug, aug_args, "--ops", "augmentations",
              "Comma list from hflip,rot90,rot180,rot270");
  bind_option(aug, aug_args, "--random", "random_pick",
              "1 = pick one seed-derived op per sample instead of all");
  bind_option(aug, aug_args, "--seed", "seed", "Random seed");
  bind_option(aug, aug_args, "--jobs", "jobs", "Worker thread count");

  CLI::App* folds = app.add_subcommand(
      "folds", "Write the five cross-validation train/test annotation pairs");
  folds->add_option("--config", folds_args.config_file, "Key-value config file");
  bind_option(folds, folds_args, "--input", "input_root",
              "Root of a synthesized dataset");
  bind_option(folds, folds_args, "--output", "output_root", "Output directory");

  CLI::App* eval = app.add_subcommand(
      "evaluate", "Score detections against rectangle ground truth");
  eval->add_option("--config", eval_args.config_file, "Key-value config file");
  bind_option(eval, eval_args, "--ground-truth", "ground_truth",
              "Rectangle annotation file");
  bind_option(eval, eval_args, "--detections", "detections",
              "Detection list file (x y w h score)");
  bind_option(eval, eval_args, "--output", "output_root",
              "Directory for the CSV outputs");
  bind_option(eval, eval_args, "--iou", "iou_threshold",
              "Match IoU threshold (default 0.5)");
  bind_option(eval, eval_args, "--score-threshold", "score_threshold",
              "Operating point for the miss scatter (default: all)");
  bind_option(eval, eval_args, "--image-root", "image_root",
              "Image root; enables fn_scatter.csv");

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) return run(synth_args, fddb360_synthesize, "synthesize");
  if (aug->parsed()) return run(aug_args, fddb360_augment, "augment");
  if (folds->parsed()) return run(folds_args, fddb360_folds, "folds");
  if (eval->parsed()) return run(eval_args, fddb360_evaluate, "evaluate");
  return 1;
}
