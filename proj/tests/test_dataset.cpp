// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stepgame/dataset.hpp"

using namespace stepgame;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("stepgame-test-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool hex_ok(const std::string& s) {
  return s.size() == 16 && s.find_first_not_of("0123456789abcdef") == std::string::npos;
}

Sample mini_sample(const std::string& id, int k, std::vector<std::string> story,
                   const std::string& question, AnswerLabel label) {
  Sample s;
  s.id = id;
  s.split = "test";
  s.k = k;
  s.story = std::move(story);
  s.question = question;
  s.label = label;
  s.seed = 1;
  return s;
}

DatasetOptions small_options(std::uint64_t seed) {
  DatasetOptions options;
  options.master_seed = seed;
  options.splits = {
      {"train", 1, 3, 400, false},
      {"valid", 1, 3, 50, false},
      {"test", 1, 4, 300, true},
  };
  return options;
}

}  // namespace

TEST_CASE("jsonl round trip with fixed field order") {
  const fs::path dir = temp_dir("jsonl");
  Sample s = mini_sample("test-k1-0", 1, {"A is above B."}, "Where is A relative to B?",
                         AnswerLabel::Top);
  s.noise.irrelevant = 2;
  s.seed = 18446744073709551615ull;  // full 64-bit range survives
  write_jsonl({s}, dir / "one.jsonl");

  const std::string bytes = read_bytes(dir / "one.jsonl");
  CHECK(bytes ==
        "{\"id\":\"test-k1-0\",\"split\":\"test\",\"k\":1,\"story\":[\"A is above B.\"],"
        "\"question\":\"Where is A relative to B?\",\"label\":\"top\","
        "\"noise\":{\"irrelevant\":2,\"disconnected\":0,\"supporting\":0},"
        "\"seed\":18446744073709551615}\n");

  const auto loaded = read_jsonl(dir / "one.jsonl");
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].id == s.id);
  CHECK(loaded[0].story == s.story);
  CHECK(loaded[0].label == s.label);
  CHECK(loaded[0].noise.irrelevant == 2);
  CHECK(loaded[0].seed == s.seed);
}

TEST_CASE("read_jsonl names the offending line") {
  const fs::path dir = temp_dir("jsonl-bad");
  {
    std::ofstream out(dir / "bad.jsonl", std::ios::binary);
    out << sample_to_json(mini_sample("a", 1, {"x"}, "q", AnswerLabel::Top)).dump() << "\n";
    out << "{\"id\": \"trunc";  // truncated last line
  }
  try {
    read_jsonl(dir / "bad.jsonl");
    FAIL("expected ParseFailure");
  } catch (const ParseFailure& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }

  {
    std::ofstream out(dir / "badlabel.jsonl", std::ios::binary);
    Json j = sample_to_json(mini_sample("a", 1, {"x"}, "q", AnswerLabel::Top));
    j["label"] = "sideways";
    out << j.dump() << "\n";
  }
  CHECK_THROWS_AS(read_jsonl(dir / "badlabel.jsonl"), ParseFailure);
}

TEST_CASE("generate_dataset writes planned files, manifest matches disk") {
  const fs::path dir = temp_dir("gen");
  const DatasetOptions options = small_options(1234);
  const Json manifest = generate_dataset(options, TemplateSet::bundled_default(), dir);

  CHECK(manifest.at("total_samples").get<int>() == 3 * 400 + 3 * 50 + 4 * 300);
  for (const auto& split : manifest.at("splits")) {
    for (const auto& file : split.at("files")) {
      const fs::path path = dir / file.at("file").get<std::string>();
      REQUIRE(fs::exists(path));
      const auto samples = read_jsonl(path);
      CHECK(static_cast<int>(samples.size()) == file.at("count").get<int>());
      CHECK(hex_ok(file.at("fnv1a64").get<std::string>()));
    }
  }

  // Train and valid are noise-free; ids follow <split>-k<k>-<index>.
  const auto train_k1 = read_jsonl(dir / "train-k1.jsonl");
  CHECK(train_k1[0].id == "train-k1-0");
  for (const auto& s : train_k1) {
    CHECK(s.noise.irrelevant + s.noise.disconnected + s.noise.supporting == 0);
    CHECK(s.split == "train");
    CHECK(s.k == 1);
    CHECK(s.story.size() == 1);
  }
  // Some test samples carry noise.
  const auto test_k3 = read_jsonl(dir / "test-k3.jsonl");
  int with_noise = 0;
  for (const auto& s : test_k3) {
    if (s.noise.irrelevant + s.noise.disconnected + s.noise.supporting > 0) ++with_noise;
  }
  CHECK(with_noise > 0);
}

TEST_CASE("generation is byte-identical across runs and worker counts") {
  const fs::path dir_a = temp_dir("det-a");
  const fs::path dir_b = temp_dir("det-b");
  const fs::path dir_c = temp_dir("det-c");

  DatasetOptions options = small_options(777);
  options.jobs = 1;
  generate_dataset(options, TemplateSet::bundled_default(), dir_a);
  generate_dataset(options, TemplateSet::bundled_default(), dir_b);
  options.jobs = 4;
  generate_dataset(options, TemplateSet::bundled_default(), dir_c);

  for (const auto& entry : fs::directory_iterator(dir_a)) {
    const std::string name = entry.path().filename().string();
    const std::string bytes = read_bytes(entry.path());
    CHECK(bytes == read_bytes(dir_b / name));
    CHECK(bytes == read_bytes(dir_c / name));
  }

  // Different seeds give different corpora.
  const fs::path dir_d = temp_dir("det-d");
  DatasetOptions other = small_options(778);
  other.jobs = 1;
  generate_dataset(other, TemplateSet::bundled_default(), dir_d);
  CHECK(read_bytes(dir_a / "train-k1.jsonl") != read_bytes(dir_d / "train-k1.jsonl"));
}

TEST_CASE("leakage trivial cases") {
  std::vector<Sample> train;
  std::vector<Sample> test;
  for (int i = 0; i < 5; ++i) {
    train.push_back(mini_sample("train-" + std::to_string(i), 1,
                                {"A is above B.", "C is above D."},
                                "Where is A relative to B?", AnswerLabel::Top));
  }
  SUBCASE("test equals train -> 100%") {
    const auto report = leakage_report(train, train, LeakageMode::Surface);
    CHECK(report.overall_fraction == 1.0);
    CHECK(report.overlapping == 5);
  }
  SUBCASE("disjoint -> 0%") {
    test.push_back(mini_sample("t-0", 1, {"E is above F."}, "Where is E relative to F?",
                               AnswerLabel::Top));
    const auto report = leakage_report(train, test, LeakageMode::Surface);
    CHECK(report.overall_fraction == 0.0);
    CHECK(report.overlapping_ids.empty());
  }
  SUBCASE("surface keys ignore sentence order") {
    test.push_back(mini_sample("t-1", 1, {"C is above D.", "A is above B."},
                               "Where is A relative to B?", AnswerLabel::Top));
    const auto report = leakage_report(train, test, LeakageMode::Surface);
    CHECK(report.overall_fraction == 1.0);
  }
  SUBCASE("empty input is rejected") {
    CHECK_THROWS_AS(leakage_report(train, {}, LeakageMode::Surface), ValidationError);
  }
}

TEST_CASE("structural leakage sees through templates and shuffling") {
  const TemplateSet& ts = TemplateSet::bundled_default();
  // Same structure, different wording and order; question pair identical.
  const auto train = std::vector<Sample>{
      mini_sample("tr-0", 2, {"A is above B.", "B is west of C."},
                  "Where is A relative to C?", AnswerLabel::TopLeft)};
  const auto same = std::vector<Sample>{
      mini_sample("te-0", 2, {"C is to the right of B.", "B has A above it."},
                  "What is the relation of the agent A to the agent C?",
                  AnswerLabel::TopLeft)};
  const auto report = leakage_report(train, same, LeakageMode::Structural, &ts);
  CHECK(report.overall_fraction == 1.0);

  // Disconnected noise is stripped by the component restriction.
  const auto with_disconnected = std::vector<Sample>{
      mini_sample("te-1", 2, {"A is above B.", "B is west of C.", "X is above Y."},
                  "Where is A relative to C?", AnswerLabel::TopLeft)};
  const auto report2 = leakage_report(train, with_disconnected, LeakageMode::Structural, &ts);
  CHECK(report2.overall_fraction == 1.0);

  // Branch noise attached to the component is kept, so the key differs.
  const auto with_branch = std::vector<Sample>{
      mini_sample("te-2", 2, {"A is above B.", "B is west of C.", "X is above B."},
                  "Where is A relative to C?", AnswerLabel::TopLeft)};
  const auto report3 = leakage_report(train, with_branch, LeakageMode::Structural, &ts);
  CHECK(report3.overall_fraction == 0.0);

  // Question direction matters.
  const auto flipped = std::vector<Sample>{
      mini_sample("te-3", 2, {"A is above B.", "B is west of C."},
                  "Where is C relative to A?", AnswerLabel::DownRight)};
  const auto report4 = leakage_report(train, flipped, LeakageMode::Structural, &ts);
  CHECK(report4.overall_fraction == 0.0);

  // Unparseable stories are reported.
  const auto broken = std::vector<Sample>{
      mini_sample("te-4", 1, {"A hugs B."}, "Where is A relative to B?", AnswerLabel::Top)};
  CHECK_THROWS_AS(leakage_report(train, broken, LeakageMode::Structural, &ts), ParseFailure);
}

TEST_CASE("generated corpus: no structural leakage beyond k=1") {
  const fs::path dir = temp_dir("leak");
  DatasetOptions options = small_options(2718);
  generate_dataset(options, TemplateSet::bundled_default(), dir);

  std::vector<Sample> train;
  for (int k = 1; k <= 3; ++k) {
    auto part = read_jsonl(dir / ("train-k" + std::to_string(k) + ".jsonl"));
    train.insert(train.end(), part.begin(), part.end());
  }
  std::vector<Sample> test;
  for (int k = 1; k <= 4; ++k) {
    auto part = read_jsonl(dir / ("test-k" + std::to_string(k) + ".jsonl"));
    test.insert(test.end(), part.begin(), part.end());
  }

  const TemplateSet& ts = TemplateSet::bundled_default();
  const auto report = leakage_report(train, test, LeakageMode::Structural, &ts);
  for (const auto& [k, overlap] : report.overlap_per_k) {
    if (k >= 2) CHECK(overlap == 0);
  }
}

TEST_CASE("stats_report shapes") {
  std::vector<Sample> samples;
  samples.push_back(mini_sample("a", 1, {"A is above B."}, "Where is A relative to B?",
                                AnswerLabel::Top));
  samples.push_back(mini_sample("b", 2, {"A is above B.", "C is under B."},
                                "Where is C relative to A?", AnswerLabel::Down));
  const Json j = stats_report(samples);
  CHECK(j.at("total").get<int>() == 2);
  CHECK(j.at("labels").size() == 9);  // all buckets present, possibly zero
  CHECK(j.at("labels").at("top").get<int>() == 1);
  CHECK(j.at("labels").at("overlap").get<int>() == 0);
  int per_k_sum = 0;
  for (const auto& [k, n] : j.at("per_k").items()) per_k_sum += n.get<int>();
  CHECK(per_k_sum == 2);
  CHECK(j.at("noise").at("irrelevant").get<int>() == 0);
  // 'A' appears once in each story and once in each question.
  CHECK(j.at("entity_mentions").at("A").get<int>() == 4);
  CHECK_THROWS_AS(stats_report({}), ValidationError);
}
