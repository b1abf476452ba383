// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#include "stepgame.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "stepgame/dataset.hpp"
#include "stepgame/errors.hpp"
#include "stepgame/eval.hpp"
#include "stepgame/generator.hpp"
#include "stepgame/templates.hpp"
#include "stepgame/version.hpp"

// The opaque handle wraps an immutable set; const casts are safe on read.
struct sg_templates {
  stepgame::TemplateSet set;
};

namespace {

using stepgame::Json;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** error_out, const std::string& message) {
  if (error_out != nullptr) *error_out = dup_string(message);
}

// Runs `body`, translating exceptions into status codes and messages.
template <typename Body>
sg_status guarded(char** error_out, Body&& body) {
  if (error_out != nullptr) *error_out = nullptr;
  try {
    return body();
  } catch (const stepgame::IoError& e) {
    set_error(error_out, e.what());
    return SG_ERR_IO;
  } catch (const stepgame::ParseFailure& e) {
    set_error(error_out, e.what());
    return SG_ERR_PARSE;
  } catch (const stepgame::ValidationError& e) {
    set_error(error_out, e.what());
    return SG_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(error_out, e.what());
    return SG_ERR_INTERNAL;
  } catch (...) {
    set_error(error_out, "unknown error");
    return SG_ERR_INTERNAL;
  }
}

const stepgame::TemplateSet& resolve_templates(const sg_templates* t) {
  return t == nullptr ? stepgame::TemplateSet::bundled_default() : t->set;
}

sg_status require(bool ok, const char* message, char** error_out) {
  if (ok) return SG_OK;
  set_error(error_out, message);
  return SG_ERR_INVALID_ARGUMENT;
}

stepgame::NoiseTypeConfig noise_type_from_json(const Json& j,
                                               const stepgame::NoiseTypeConfig& defaults) {
  stepgame::NoiseTypeConfig out = defaults;
  if (j.contains("probability")) out.probability = j.at("probability").get<double>();
  if (j.contains("min")) out.min_count = j.at("min").get<int>();
  if (j.contains("max")) out.max_count = j.at("max").get<int>();
  return out;
}

stepgame::DatasetOptions options_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw stepgame::ValidationError(std::string("options: ") + e.what());
  }
  if (!j.contains("master_seed")) {
    throw stepgame::ValidationError("options: master_seed is required");
  }
  stepgame::DatasetOptions options;
  options.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("entity_pool_size")) {
    options.entity_pool_size = j.at("entity_pool_size").get<int>();
  }
  if (j.contains("jobs")) options.jobs = j.at("jobs").get<int>();
  if (j.contains("dedup_test_vs_train")) {
    options.dedup_test_vs_train = j.at("dedup_test_vs_train").get<bool>();
  }
  if (j.contains("noise")) {
    const Json& n = j.at("noise");
    if (n.contains("irrelevant")) {
      options.noise.irrelevant = noise_type_from_json(n.at("irrelevant"), options.noise.irrelevant);
    }
    if (n.contains("disconnected")) {
      options.noise.disconnected =
          noise_type_from_json(n.at("disconnected"), options.noise.disconnected);
    }
    if (n.contains("supporting")) {
      options.noise.supporting = noise_type_from_json(n.at("supporting"), options.noise.supporting);
    }
  }
  if (j.contains("splits")) {
    for (const Json& s : j.at("splits")) {
      stepgame::SplitPlan plan;
      plan.name = s.at("name").get<std::string>();
      plan.k_min = s.value("k_min", 1);
      plan.k_max = s.value("k_max", plan.k_min);
      plan.per_k = s.at("per_k").get<int>();
      plan.noise = s.value("noise", false);
      options.splits.push_back(std::move(plan));
    }
  }
  return options;
}

}  // namespace

extern "C" {

const char* sg_version(void) { return stepgame::kVersion; }

void sg_string_free(char* s) { std::free(s); }

sg_status sg_complexity(uint32_t k, uint32_t entities, char** decimal_out, char** error_out) {
  if (const sg_status s = require(decimal_out != nullptr, "decimal_out is NULL", error_out);
      s != SG_OK) {
    return s;
  }
  return guarded(error_out, [&] {
    const stepgame::BigUint count =
        stepgame::complexity_count(static_cast<int>(k), static_cast<int>(entities));
    *decimal_out = dup_string(count.to_string());
    return SG_OK;
  });
}

sg_status sg_templates_open(const char* path, sg_templates** out, char** error_out) {
  if (const sg_status s = require(out != nullptr, "out is NULL", error_out); s != SG_OK) {
    return s;
  }
  return guarded(error_out, [&] {
    auto* handle = new sg_templates{path == nullptr
                                        ? stepgame::TemplateSet::bundled_default()
                                        : stepgame::TemplateSet::load_file(path)};
    *out = handle;
    return SG_OK;
  });
}

sg_status sg_templates_info(const sg_templates* t, char** json_out, char** error_out) {
  if (const sg_status s = require(json_out != nullptr, "json_out is NULL", error_out);
      s != SG_OK) {
    return s;
  }
  return guarded(error_out, [&] {
    const stepgame::TemplateSet& set = resolve_templates(t);
    Json j;
    j["source"] = set.source_name();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(set.checksum()));
    j["fnv1a64"] = buf;
    Json counts = Json::object();
    for (const auto& [name, count] : set.counts()) counts[name] = count;
    j["counts"] = std::move(counts);
    *json_out = dup_string(j.dump());
    return SG_OK;
  });
}

void sg_templates_close(sg_templates* t) { delete t; }

sg_status sg_generate(const char* options_json, const char* out_dir, const sg_templates* templates,
                      char** manifest_json_out, char** error_out) {
  if (const sg_status s =
          require(options_json != nullptr && out_dir != nullptr, "options_json or out_dir is NULL",
                  error_out);
      s != SG_OK) {
    return s;
  }
  return guarded(error_out, [&] {
    const stepgame::DatasetOptions options = options_from_json(options_json);
    const Json manifest =
        stepgame::generate_dataset(options, resolve_templates(templates), out_dir);
    if (manifest_json_out != nullptr) *manifest_json_out = dup_string(manifest.dump());
    return SG_OK;
  });
}

sg_status sg_stats(const char* data_jsonl, char** report_json_out, char** error_out) {
  if (const sg_status s = require(data_jsonl != nullptr && report_json_out != nullptr,
                                  "data_jsonl or report_json_out is NULL", error_out);
      s != SG_OK) {
    return s;
  }
  return guarded(error_out, [&] {
    const auto samples = stepgame::read_jsonl(data_jsonl);
    *report_json_out = dup_string(stepgame::stats_report(samples).dump());
    return SG_OK;
  });
}

sg_status sg_leakage(const char* train_jsonl, const char* test_jsonl, const char* mode,
                     const sg_templates* templates, char** report_json_out, char** error_out) {
  if (const sg_status s =
          require(train_jsonl != nullptr && test_jsonl != nullptr && mode != nullptr &&
                      report_json_out != nullptr,
                  "a required argument is NULL", error_out);
      s != SG_OK) {
    return s;
  }
  return guarded(error_out, [&] {
    stepgame::LeakageMode leakage_mode;
    if (std::strcmp(mode, "surface") == 0) {
      leakage_mode = stepgame::LeakageMode::Surface;
    } else if (std::strcmp(mode, "structural") == 0) {
      leakage_mode = stepgame::LeakageMode::Structural;
    } else {
      throw stepgame::ValidationError(std::string("unknown leakage mode: ") + mode);
    }
    const auto train = stepgame::read_jsonl(train_jsonl);
    const auto test = stepgame::read_jsonl(test_jsonl);
    const stepgame::TemplateSet& set = resolve_templates(templates);
    const auto report = stepgame::leakage_report(train, test, leakage_mode, &set);
    *report_json_out = dup_string(stepgame::leakage_to_json(report).dump());
    return SG_OK;
  });
}

sg_status sg_eval(const char* gold_jsonl, const char* predictions_path, char** report_json_out,
                  char** error_out) {
  if (const sg_status s = require(gold_jsonl != nullptr && predictions_path != nullptr &&
                                      report_json_out != nullptr,
                                  "a required argument is NULL", error_out);
      s != SG_OK) {
    return s;
  }
  return guarded(error_out, [&] {
    const auto gold = stepgame::read_jsonl(gold_jsonl);
    const auto predictions = stepgame::read_predictions(predictions_path);
    const auto report = stepgame::score(gold, predictions);
    *report_json_out = dup_string(stepgame::eval_to_json(report).dump());
    return SG_OK;
  });
}

sg_status sg_solve(const char* data_jsonl, const sg_templates* templates,
                   const char* predictions_out_path, char** report_json_out, char** error_out) {
  if (const sg_status s = require(data_jsonl != nullptr, "data_jsonl is NULL", error_out);
      s != SG_OK) {
    return s;
  }
  return guarded(error_out, [&] {
    const auto samples = stepgame::read_jsonl(data_jsonl);
    const auto outcome = stepgame::solver_predict(samples, resolve_templates(templates));
    if (predictions_out_path != nullptr) {
      stepgame::write_predictions(outcome.predictions, predictions_out_path);
    }
    if (report_json_out != nullptr) {
      *report_json_out = dup_string(stepgame::solve_to_json(outcome).dump());
    }
    return SG_OK;
  });
}

}  // extern "C"
