/*
 * Copyright (c) 2026 The stepgame authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API of the stepgame shared library.
 *
 * Conventions:
 *   - Every function returns an sg_status; SG_OK (0) means success.
 *   - Output strings (reports, manifests, error messages) are heap
 *     allocated; release them with sg_string_free().
 *   - On failure, *error_out (when non-NULL) receives a message describing
 *     the problem; it is NULL on success.
 *   - sg_templates is an opaque handle; close it with sg_templates_close().
 *   - Passing NULL where a template handle is expected selects the bundled
 *     default template set.
 *
 * Complex inputs and outputs travel as JSON documents; see the project
 * README for the option and report schemas.
 */

#ifndef STEPGAME_H
#define STEPGAME_H

#include <stdint.h>

#if defined(_WIN32)
#define SG_API __declspec(dllexport)
#else
#define SG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sg_status {
  SG_OK = 0,
  SG_ERR_INVALID_ARGUMENT = 1,
  SG_ERR_IO = 2,
  SG_ERR_PARSE = 3,
  SG_ERR_INTERNAL = 4
} sg_status;

typedef struct sg_templates sg_templates;

SG_API const char* sg_version(void);

SG_API void sg_string_free(char* s);

/* Exact count of distinct samples for k hops over an entity pool, written
 * as a decimal string. */
SG_API sg_status sg_complexity(uint32_t k, uint32_t entities, char** decimal_out,
                               char** error_out);

/* Loads and validates a template file; path NULL loads the bundled set. */
SG_API sg_status sg_templates_open(const char* path, sg_templates** out, char** error_out);

/* {"source": ..., "checksum": ..., "counts": {...}} */
SG_API sg_status sg_templates_info(const sg_templates* t, char** json_out, char** error_out);

SG_API void sg_templates_close(sg_templates* t);

/* Generates a dataset under out_dir and returns the manifest JSON.
 * options_json must contain "master_seed"; everything else has defaults:
 * {
 *   "master_seed": 7,
 *   "entity_pool_size": 26,
 *   "jobs": 0,
 *   "dedup_test_vs_train": true,
 *   "noise": {"irrelevant":   {"probability": 0.333, "min": 1, "max": 3},
 *             "disconnected": {"probability": 0.333, "min": 1, "max": 3},
 *             "supporting":   {"probability": 0.333, "min": 1, "max": 2}},
 *   "splits": [{"name": "train", "k_min": 1, "k_max": 5,
 *               "per_k": 10000, "noise": false}, ...]
 * } */
SG_API sg_status sg_generate(const char* options_json, const char* out_dir,
                             const sg_templates* templates, char** manifest_json_out,
                             char** error_out);

/* Descriptive statistics of a JSONL dataset file. */
SG_API sg_status sg_stats(const char* data_jsonl, char** report_json_out, char** error_out);

/* Train/test overlap; mode is "surface" or "structural". Structural mode
 * parses stories with the given template set. */
SG_API sg_status sg_leakage(const char* train_jsonl, const char* test_jsonl, const char* mode,
                            const sg_templates* templates, char** report_json_out,
                            char** error_out);

/* Scores a predictions file (JSONL or TSV) against a gold JSONL file. */
SG_API sg_status sg_eval(const char* gold_jsonl, const char* predictions_path,
                         char** report_json_out, char** error_out);

/* Answers every story symbolically and writes predictions JSONL to
 * predictions_out_path (skipped when NULL). */
SG_API sg_status sg_solve(const char* data_jsonl, const sg_templates* templates,
                          const char* predictions_out_path, char** report_json_out,
                          char** error_out);

#ifdef __cplusplus
}
#endif

#endif /* STEPGAME_H */
