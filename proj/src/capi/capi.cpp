#include "fddb360.h"

#include <limits>
#include <string>

#include "core/error.hpp"
#include "core/pipeline.hpp"

struct fddb360_config {
  fddb360::PipelineConfig config;
};

struct fddb360_result {
  fddb360::RunResult result;
};

namespace {

thread_local std::string g_last_error;

fddb360_status status_of(fddb360::ErrorCode code) {
  using fddb360::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return FDDB360_ERROR_INVALID_ARGUMENT;
    case ErrorCode::parse: return FDDB360_ERROR_PARSE;
    case ErrorCode::domain: return FDDB360_ERROR_DOMAIN;
    case ErrorCode::io: return FDDB360_ERROR_IO;
    case ErrorCode::internal: return FDDB360_ERROR_INTERNAL;
  }
  return FDDB360_ERROR_INTERNAL;
}

template <typename Fn>
fddb360_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const fddb360::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FDDB360_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FDDB360_ERROR_INTERNAL;
  }
}

fddb360_status run_result(fddb360::RunResult run, fddb360_result** result) {
  const bool partial = run.failures > 0;
  if (result) *result = new fddb360_result{run};
  return partial ? FDDB360_PARTIAL : FDDB360_OK;
}

}  // namespace

extern "C" {

const char* fddb360_version(void) { return FDDB360_VERSION; }

const char* fddb360_last_error(void) { return g_last_error.c_str(); }

fddb360_config* fddb360_config_new(void) { return new fddb360_config(); }

void fddb360_config_free(fddb360_config* config) { delete config; }

fddb360_status fddb360_config_set(fddb360_config* config, const char* key,
                                  const char* value) {
  if (!config || !key || !value) {
    g_last_error = "null argument";
    return FDDB360_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    config->config.set(key, value);
    return FDDB360_OK;
  });
}

fddb360_status fddb360_config_load_file(fddb360_config* config,
                                        const char* path) {
  if (!config || !path) {
    g_last_error = "null argument";
    return FDDB360_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    config->config.load_file(path);
    return FDDB360_OK;
  });
}

fddb360_status fddb360_synthesize(const fddb360_config* config,
                                  fddb360_result** result) {
  if (!config) {
    g_last_error = "null config";
    return FDDB360_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const fddb360::RunManifest manifest =
        fddb360::run_synthesis(config->config);
    return run_result(fddb360::manifest_summary(manifest), result);
  });
}

fddb360_status fddb360_augment(const fddb360_config* config,
                               fddb360_result** result) {
  if (!config) {
    g_last_error = "null config";
    return FDDB360_ERROR_INVALID_ARGUMENT;
  }
  return guarded(
      [&] { return run_result(fddb360::run_augment(config->config), result); });
}

fddb360_status fddb360_folds(const fddb360_config* config,
                             fddb360_result** result) {
  if (!config) {
    g_last_error = "null config";
    return FDDB360_ERROR_INVALID_ARGUMENT;
  }
  return guarded(
      [&] { return run_result(fddb360::run_folds(config->config), result); });
}

fddb360_status fddb360_evaluate(const fddb360_config* config,
                                fddb360_result** result) {
  if (!config) {
    g_last_error = "null config";
    return FDDB360_ERROR_INVALID_ARGUMENT;
  }
  return guarded(
      [&] { return run_result(fddb360::run_evaluate(config->config), result); });
}

int64_t fddb360_result_images(const fddb360_result* result) {
  return result ? result->result.images : 0;
}

int64_t fddb360_result_faces(const fddb360_result* result) {
  return result ? result->result.faces : 0;
}

int64_t fddb360_result_failures(const fddb360_result* result) {
  return result ? result->result.failures : 0;
}

double fddb360_result_auc(const fddb360_result* result) {
  return result ? result->result.auc
                : std::numeric_limits<double>::quiet_NaN();
}

void fddb360_result_free(fddb360_result* result) { delete result; }

}  // extern "C"
