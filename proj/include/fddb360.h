/* fddb360 — fisheye-style face dataset synthesis and evaluation.
 *
 * C interface of the shared library.  Configuration is a set of string
 * key/value pairs (the same keys the CLI flags and config files use); the
 * four run entry points mirror the CLI subcommands.  All functions return a
 * status code; fddb360_last_error() describes the most recent failure on the
 * calling thread.
 */
#ifndef FDDB360_H
#define FDDB360_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fddb360_status {
  FDDB360_OK = 0,
  /* Completed, but some inputs failed and were skipped; details are in the
     run's manifest. */
  FDDB360_PARTIAL = 1,
  FDDB360_ERROR_INVALID_ARGUMENT = 2,
  FDDB360_ERROR_PARSE = 3,
  FDDB360_ERROR_DOMAIN = 4,
  FDDB360_ERROR_IO = 5,
  FDDB360_ERROR_INTERNAL = 6
} fddb360_status;

typedef struct fddb360_config fddb360_config;
typedef struct fddb360_result fddb360_result;

const char* fddb360_version(void);

/* Message for the most recent failing call on this thread; empty string when
   the last call succeeded.  The pointer stays valid until the next call. */
const char* fddb360_last_error(void);

fddb360_config* fddb360_config_new(void);
void fddb360_config_free(fddb360_config* config);

/* Known keys include: input_image_root, annotations (';'-separated FDDB
 * ellipse lists in fold order), fold_lists, output_root, patch_radius,
 * exclusion_penalty, fill_color (RRGGBB), seed, jobs, debug_dir, input_root,
 * augmentations (','-separated from hflip/rot90/rot180/rot270), random_pick,
 * ground_truth, detections, iou_threshold, score_threshold, image_root. */
fddb360_status fddb360_config_set(fddb360_config* config, const char* key,
                                  const char* value);

/* Loads "key value" / "key=value" lines; '#' starts a comment. */
fddb360_status fddb360_config_load_file(fddb360_config* config,
                                        const char* path);

/* Converts FDDB ellipse annotations plus images into fisheye-looking
   circular samples with remapped boxes, per-fold annotation files, and a
   manifest under output_root. */
fddb360_status fddb360_synthesize(const fddb360_config* config,
                                  fddb360_result** result);

/* Materializes flipped/rotated copies of a synthesized dataset. */
fddb360_status fddb360_augment(const fddb360_config* config,
                               fddb360_result** result);

/* Writes the five cross-validation train/test annotation file pairs. */
fddb360_status fddb360_folds(const fddb360_config* config,
                             fddb360_result** result);

/* Scores a detection list against rectangle ground truth: precision-recall
   with AUC, discrete ROC, and optional miss-location scatter. */
fddb360_status fddb360_evaluate(const fddb360_config* config,
                                fddb360_result** result);

int64_t fddb360_result_images(const fddb360_result* result);
int64_t fddb360_result_faces(const fddb360_result* result);
int64_t fddb360_result_failures(const fddb360_result* result);
/* Area under the precision-recall curve; NaN except after evaluate. */
double fddb360_result_auc(const fddb360_result* result);
void fddb360_result_free(fddb360_result* result);

#ifdef __cplusplus
}
#endif

#endif /* FDDB360_H */
