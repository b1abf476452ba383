// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. All functionality lives behind the C API of the
// stepgame shared library; this binary only parses flags, builds the JSON
// options, and formats reports.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stepgame.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct StringOut {
  char* value = nullptr;
  ~StringOut() { sg_string_free(value); }
  char** out() { return &value; }
  std::string str() const { return value == nullptr ? std::string() : std::string(value); }
};

int exit_code_for(sg_status status) {
  return status == SG_ERR_IO ? kExitIo : kExitValidation;
}

int fail(sg_status status, const StringOut& error) {
  std::fprintf(stderr, "error: %s\n",
               error.value == nullptr ? "unspecified failure" : error.value);
  return exit_code_for(status);
}

using TemplateHandle = std::unique_ptr<sg_templates, decltype(&sg_templates_close)>;

// Empty path selects the bundled set.
std::optional<TemplateHandle> open_templates(const std::string& path, int& exit_code) {
  sg_templates* raw = nullptr;
  StringOut error;
  const sg_status status =
      sg_templates_open(path.empty() ? nullptr : path.c_str(), &raw, error.out());
  if (status != SG_OK) {
    exit_code = fail(status, error);
    return std::nullopt;
  }
  return TemplateHandle(raw, &sg_templates_close);
}

void print_template_counts(const sg_templates* handle) {
  StringOut info;
  if (sg_templates_info(handle, info.out(), nullptr) != SG_OK) return;
  const Json j = Json::parse(info.str());
  std::string line = "templates (" + j["source"].get<std::string>() + "):";
  for (const auto& [name, count] : j["counts"].items()) {
    line += " " + name + "=" + std::to_string(count.get<int>());
  }
  std::fprintf(stderr, "%s\n", line.c_str());
}

struct GenerateArgs {
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string templates_path;
  int entities = 26;
  int jobs = 0;
  bool no_dedup = false;
  bool no_test_noise = false;
  std::pair<int, int> train_k{1, 5};
  std::pair<int, int> valid_k{1, 5};
  std::pair<int, int> test_k{1, 10};
  int train_per_k = 10000;
  int valid_per_k = 1000;
  int test_per_k = 10000;
  double noise_prob = 1.0 / 3.0;
  bool json_output = false;
};

int run_generate(const GenerateArgs& args) {
  Json options;
  options["master_seed"] = args.seed;
  options["entity_pool_size"] = args.entities;
  options["jobs"] = args.jobs;
  options["dedup_test_vs_train"] = !args.no_dedup;
  {
    Json noise;
    for (const char* type : {"irrelevant", "disconnected", "supporting"}) {
      noise[type]["probability"] = args.noise_prob;
    }
    options["noise"] = std::move(noise);
  }
  {
    Json splits = Json::array();
    const auto add = [&splits](const char* name, std::pair<int, int> k, int per_k, bool noise) {
      Json s;
      s["name"] = name;
      s["k_min"] = k.first;
      s["k_max"] = k.second;
      s["per_k"] = per_k;
      s["noise"] = noise;
      splits.push_back(std::move(s));
    };
    add("train", args.train_k, args.train_per_k, false);
    add("valid", args.valid_k, args.valid_per_k, false);
    add("test", args.test_k, args.test_per_k, !args.no_test_noise);
    options["splits"] = std::move(splits);
  }

  int exit_code = kExitOk;
  auto handle = open_templates(args.templates_path, exit_code);
  if (!handle) return exit_code;
  print_template_counts(handle->get());

  StringOut manifest;
  StringOut error;
  const sg_status status = sg_generate(options.dump().c_str(), args.out_dir.c_str(),
                                       handle->get(), manifest.out(), error.out());
  if (status != SG_OK) return fail(status, error);

  const Json m = Json::parse(manifest.str());
  if (args.json_output) {
    std::printf("%s\n", m.dump(2).c_str());
  } else {
    std::printf("manifest: %s/manifest.json\n", args.out_dir.c_str());
    for (const auto& split : m["splits"]) {
      const std::int64_t total = static_cast<std::int64_t>(split["per_k"].get<int>()) *
                                 (split["k_max"].get<int>() - split["k_min"].get<int>() + 1);
      std::printf("%s: k=%d..%d, %d per k, %" PRId64 " samples, noise %s\n",
                  split["name"].get<std::string>().c_str(), split["k_min"].get<int>(),
                  split["k_max"].get<int>(), split["per_k"].get<int>(), total,
                  split["noise"].get<bool>() ? "on" : "off");
    }
  }
  return kExitOk;
}

int run_complexity(int k, int entities, bool json_output) {
  StringOut decimal;
  StringOut error;
  const sg_status status = sg_complexity(static_cast<uint32_t>(k),
                                         static_cast<uint32_t>(entities), decimal.out(),
                                         error.out());
  if (status != SG_OK) return fail(status, error);
  const std::string count = decimal.str();
  if (json_output) {
    Json j;
    j["k"] = k;
    j["entities"] = entities;
    j["count"] = count;
    std::printf("%s\n", j.dump().c_str());
  } else if (count.size() > 7) {
    std::printf("%s (~%c.%se%zu)\n", count.c_str(), count[0], count.substr(1, 4).c_str(),
                count.size() - 1);
  } else {
    std::printf("%s\n", count.c_str());
  }
  return kExitOk;
}

int print_report(sg_status status, StringOut& report, StringOut& error, bool json_output,
                 const std::function<void(const Json&)>& human) {
  if (status != SG_OK) return fail(status, error);
  const Json j = Json::parse(report.str());
  if (json_output) {
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    human(j);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stepgame: deterministic multi-hop spatial-reasoning QA benchmark toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI/TOML file");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate train/valid/test splits");
  generate->add_option("--seed", gen.seed, "Master seed (required; no wall-clock default)")
      ->required();
  generate->add_option("--out", gen.out_dir, "Output directory")->required();
  generate->add_option("--templates", gen.templates_path, "Template file")
      ->envname("STEPGAME_TEMPLATES");
  generate->add_option("--entities", gen.entities, "Entity pool size (2..26)");
  generate->add_option("--jobs", gen.jobs, "Worker threads; 0 = hardware concurrency");
  generate->add_flag("--no-dedup", gen.no_dedup,
                     "Keep test chains that structurally collide with training chains");
  generate->add_flag("--no-test-noise", gen.no_test_noise, "Disable noise on the test split");
  generate->add_option("--train-k", gen.train_k, "Train k range, MIN MAX");
  generate->add_option("--valid-k", gen.valid_k, "Valid k range, MIN MAX");
  generate->add_option("--test-k", gen.test_k, "Test k range, MIN MAX");
  generate->add_option("--train-per-k", gen.train_per_k, "Train samples per k");
  generate->add_option("--valid-per-k", gen.valid_per_k, "Valid samples per k");
  generate->add_option("--test-per-k", gen.test_per_k, "Test samples per k");
  generate->add_option("--noise-prob", gen.noise_prob,
                       "Inclusion probability of each noise type on noisy splits");
  generate->add_flag("--json", gen.json_output, "Print the manifest as JSON");

  int cx_k = 1;
  int cx_entities = 26;
  bool cx_json = false;
  auto* complexity = app.add_subcommand("complexity", "Exact sample-space size");
  complexity->add_option("--k", cx_k, "Hop count")->required()->check(CLI::PositiveNumber);
  complexity->add_option("--entities", cx_entities, "Entity pool size");
  complexity->add_flag("--json", cx_json, "JSON output");

  std::string stats_data;
  bool stats_json = false;
  auto* stats = app.add_subcommand("stats", "Descriptive statistics of a JSONL file");
  stats->add_option("--data", stats_data, "Dataset JSONL file")->required();
  stats->add_flag("--json", stats_json, "JSON output");

  std::string leak_train, leak_test, leak_mode = "surface", leak_templates;
  bool leak_json = false;
  auto* leakage = app.add_subcommand("leakage", "Train/test overlap analysis");
  leakage->add_option("--train", leak_train, "Training JSONL file")->required();
  leakage->add_option("--test", leak_test, "Test JSONL file")->required();
  leakage->add_option("--mode", leak_mode, "surface or structural")
      ->check(CLI::IsMember({"surface", "structural"}));
  leakage->add_option("--templates", leak_templates, "Template file (structural mode)")
      ->envname("STEPGAME_TEMPLATES");
  leakage->add_flag("--json", leak_json, "JSON output");

  std::string eval_gold, eval_pred;
  bool eval_json = false;
  auto* eval = app.add_subcommand("eval", "Score predictions against gold labels");
  eval->add_option("--gold", eval_gold, "Gold JSONL file")->required();
  eval->add_option("--pred", eval_pred, "Predictions file (JSONL or TSV)")->required();
  eval->add_flag("--json", eval_json, "JSON output");

  std::string solve_data, solve_out, solve_templates;
  bool solve_json = false;
  auto* solve = app.add_subcommand("solve", "Answer stories with the symbolic solver");
  solve->add_option("--data", solve_data, "Dataset JSONL file")->required();
  solve->add_option("--out", solve_out, "Predictions JSONL output path")->required();
  solve->add_option("--templates", solve_templates, "Template file")
      ->envname("STEPGAME_TEMPLATES");
  solve->add_flag("--json", solve_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (generate->parsed()) return run_generate(gen);
  if (complexity->parsed()) return run_complexity(cx_k, cx_entities, cx_json);

  if (stats->parsed()) {
    StringOut report, error;
    const sg_status status = sg_stats(stats_data.c_str(), report.out(), error.out());
    return print_report(status, report, error, stats_json, [](const Json& j) {
      std::printf("samples: %d\n", j["total"].get<int>());
      for (const auto& [k, n] : j["per_k"].items()) {
        std::printf("  k=%s: %d\n", k.c_str(), n.get<int>());
      }
      std::printf("labels:\n");
      for (const auto& [label, n] : j["labels"].items()) {
        std::printf("  %-10s %d\n", label.c_str(), n.get<int>());
      }
      const auto& noise = j["noise"];
      std::printf("noise sentences: irrelevant=%d disconnected=%d supporting(x2)=%d; "
                  "samples with noise: %d\n",
                  noise["irrelevant"].get<int>(), noise["disconnected"].get<int>(),
                  noise["supporting"].get<int>(), noise["samples_with_noise"].get<int>());
    });
  }

  if (leakage->parsed()) {
    int exit_code = kExitOk;
    auto handle = open_templates(leak_templates, exit_code);
    if (!handle) return exit_code;
    StringOut report, error;
    const sg_status status = sg_leakage(leak_train.c_str(), leak_test.c_str(), leak_mode.c_str(),
                                        handle->get(), report.out(), error.out());
    return print_report(status, report, error, leak_json, [](const Json& j) {
      std::printf("%s overlap: %.2f%% (%d/%d)\n", j["mode"].get<std::string>().c_str(),
                  100.0 * j["overall_fraction"].get<double>(), j["overlapping"].get<int>(),
                  j["test_total"].get<int>());
      for (const auto& [k, entry] : j["per_k"].items()) {
        std::printf("  k=%s: %.2f%% (%d/%d)\n", k.c_str(),
                    100.0 * entry["fraction"].get<double>(), entry["overlapping"].get<int>(),
                    entry["total"].get<int>());
      }
      const auto& ids = j["overlapping_ids"];
      if (!ids.empty()) {
        std::printf("offending test ids (%zu):", ids.size());
        std::size_t shown = 0;
        for (const auto& id : ids) {
          if (shown++ == 10) {
            std::printf(" ...");
            break;
          }
          std::printf(" %s", id.get<std::string>().c_str());
        }
        std::printf("\n");
      }
    });
  }

  if (eval->parsed()) {
    StringOut report, error;
    const sg_status status =
        sg_eval(eval_gold.c_str(), eval_pred.c_str(), report.out(), error.out());
    return print_report(status, report, error, eval_json, [](const Json& j) {
      for (const auto& [k, entry] : j["per_k"].items()) {
        std::printf("k=%-2s accuracy %.4f (%d/%d)\n", k.c_str(),
                    entry["accuracy"].get<double>(), entry["correct"].get<int>(),
                    entry["total"].get<int>());
      }
      std::printf("mean over k: %.4f\n", j["mean_over_k_accuracy"].get<double>());
      std::printf("micro:       %.4f (%d/%d)\n", j["micro_accuracy"].get<double>(),
                  j["correct"].get<int>(), j["total"].get<int>());
      if (!j["unmatched_gold_ids"].empty()) {
        std::printf("missing predictions: %zu\n", j["unmatched_gold_ids"].size());
      }
    });
  }

  if (solve->parsed()) {
    int exit_code = kExitOk;
    auto handle = open_templates(solve_templates, exit_code);
    if (!handle) return exit_code;
    StringOut report, error;
    const sg_status status = sg_solve(solve_data.c_str(), handle->get(), solve_out.c_str(),
                                      report.out(), error.out());
    return print_report(status, report, error, solve_json, [&](const Json& j) {
      std::printf("predicted: %d; abstained: %zu; parse failures: %zu\n",
                  j["predicted"].get<int>(), j["abstained_ids"].size(), j["failures"].size());
      std::printf("predictions written to %s\n", solve_out.c_str());
    });
  }

  return kExitOk;
}
