// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stepgame/dataset.hpp"
#include "stepgame/relations.hpp"

namespace stepgame {

struct Prediction {
  std::string id;
  AnswerLabel label;
};

struct EvalReport {
  std::map<int, int> per_k_total;
  std::map<int, int> per_k_correct;
  std::map<int, double> per_k_accuracy;
  double mean_over_k = 0.0;  // unweighted mean of the per-k accuracies
  double micro = 0.0;        // correct / total over all samples
  int total = 0;
  int correct = 0;
  std::vector<std::string> unmatched_gold_ids;      // gold ids with no prediction
  std::vector<std::string> unknown_prediction_ids;  // prediction ids not in gold
};

// Exact-match scoring. Missing predictions count as wrong and are listed.
// Throws ValidationError on duplicate prediction ids.
EvalReport score(const std::vector<Sample>& gold, const std::vector<Prediction>& predictions);

Json eval_to_json(const EvalReport& report);

// Reads JSONL ({"id": ..., "label": ...}) or TSV (id<TAB>label) predictions,
// sniffing the format from the first record. Throws on duplicate ids or
// unknown label strings, naming the offender.
std::vector<Prediction> read_predictions(const std::filesystem::path& path);
void write_predictions(const std::vector<Prediction>& predictions,
                       const std::filesystem::path& path);

// Uniform label per sample from a seeded stream.
std::vector<Prediction> baseline_random(const std::vector<Sample>& gold, std::uint64_t seed);

// Modal label of the training set; ties break by the canonical label order.
AnswerLabel majority_label(const std::vector<Sample>& train);
std::vector<Prediction> baseline_majority(const std::vector<Sample>& train,
                                          const std::vector<Sample>& gold);

struct SolveOutcome {
  std::vector<Prediction> predictions;
  std::vector<std::string> abstained_ids;  // question entities disconnected
  std::vector<std::pair<std::string, std::string>> failures;  // (id, reason)
};

// Parses each story, propagates positions breadth-first from the first
// question entity, and answers from the resolved displacement. Abstains when
// the question entities are disconnected; contradictory edge sets are
// reported as failures, never silently resolved.
SolveOutcome solver_predict(const std::vector<Sample>& samples, const TemplateSet& templates);

Json solve_to_json(const SolveOutcome& outcome);

}  // namespace stepgame
