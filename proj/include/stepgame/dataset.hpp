// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "stepgame/generator.hpp"
#include "stepgame/templates.hpp"

namespace stepgame {

using Json = nlohmann::ordered_json;

// One rendered dataset record. Serialized as one JSON object per line with
// exactly these fields, in this order:
//   id, split, k, story, question, label, noise, seed
struct Sample {
  std::string id;
  std::string split;
  int k = 0;
  std::vector<std::string> story;
  std::string question;
  AnswerLabel label = AnswerLabel::Overlap;
  NoiseRecord noise;
  std::uint64_t seed = 0;
};

Json sample_to_json(const Sample& s);
Sample sample_from_json(const Json& j);

void write_jsonl(const std::vector<Sample>& samples, const std::filesystem::path& path);
// Throws ParseFailure naming the first malformed line.
std::vector<Sample> read_jsonl(const std::filesystem::path& path);

// Per-split generation plan.
struct SplitPlan {
  std::string name;
  int k_min = 1;
  int k_max = 1;
  int per_k = 0;
  bool noise = false;
};

struct DatasetOptions {
  std::uint64_t master_seed = 0;
  int entity_pool_size = kMaxEntityPool;
  NoiseConfig noise;               // ranges/probabilities; enabling is per split
  std::vector<SplitPlan> splits;   // empty -> default_splits()
  int jobs = 0;                    // 0 = hardware concurrency
  // Rejects test chains (k >= 2) whose structural key already occurs in the
  // training split, so structural train/test leakage is zero by construction
  // beyond k = 1.
  bool dedup_test_vs_train = true;

  void validate() const;
};

// train k=1..5 x 10000, valid k=1..5 x 1000, test k=1..10 x 10000; noise on
// the test split only.
std::vector<SplitPlan> default_splits();

// Generates every split, writes <split>-k<k>.jsonl files plus manifest.json
// under out_dir, and returns the manifest. Fully reproducible: the manifest
// records seed, generator names, template checksum, per-file counts and
// content hashes.
Json generate_dataset(const DatasetOptions& options, const TemplateSet& templates,
                      const std::filesystem::path& out_dir);

enum class LeakageMode { Surface, Structural };

struct LeakageReport {
  LeakageMode mode;
  int train_total = 0;
  int test_total = 0;
  int overlapping = 0;
  double overall_fraction = 0.0;
  std::map<int, int> test_per_k;
  std::map<int, int> overlap_per_k;
  std::vector<std::string> overlapping_ids;  // test ids whose key occurs in train
};

// Surface mode keys on (lexicographically sorted sentences, question text).
// Structural mode parses each story, keeps the edges of the connected
// component containing the question entities (dropping disconnected noise),
// and keys on the canonicalized sorted edge triples plus the ordered
// question pair. Structural mode needs `templates` and throws ParseFailure
// listing unparseable sample ids.
LeakageReport leakage_report(const std::vector<Sample>& train, const std::vector<Sample>& test,
                             LeakageMode mode, const TemplateSet* templates = nullptr);

Json leakage_to_json(const LeakageReport& report);

// Per-k counts, label histogram (all nine buckets), sentence-count
// histogram, noise totals and entity-usage counts.
Json stats_report(const std::vector<Sample>& samples);

}  // namespace stepgame
